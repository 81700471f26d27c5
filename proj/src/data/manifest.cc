// Copyright 2026 The pamdenoise Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pamd/data_pipeline.h"
#include "pamd/errors.h"

namespace pamd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
  } else {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
  }
  return fields;
}

}  // namespace

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw DataError("unknown split '" + name + "'");
}

std::vector<UtteranceRecord> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).lexically_normal().string();
  };

  std::vector<UtteranceRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected split, clean path, noise path, seed");
    }
    UtteranceRecord r;
    r.split = parse_split(fields[0]);
    r.clean_path = resolve(fields[1]);
    r.noise_path = resolve(fields[2]);
    try {
      std::size_t used = 0;
      r.seed = std::stoull(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad seed '" + fields[3] + "'");
    }
    char index[16];
    std::snprintf(index, sizeof(index), "%04zu", records.size());
    r.id = std::string(index) + "_" + std::filesystem::path(r.clean_path).stem().string();
    records.push_back(std::move(r));
  }
  return records;
}

void write_manifest(const std::string& path, const std::vector<UtteranceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest " + path);
  for (const UtteranceRecord& r : records) {
    out << split_name(r.split) << '\t' << r.clean_path << '\t' << r.noise_path << '\t'
        << r.seed << '\n';
  }
}

std::vector<UtteranceRecord> filter_split(const std::vector<UtteranceRecord>& records,
                                          Split split) {
  std::vector<UtteranceRecord> out;
  for (const UtteranceRecord& r : records) {
    if (r.split == split) out.push_back(r);
  }
  return out;
}

std::uint64_t mixing_seed(const UtteranceRecord& record, std::uint64_t run_seed) {
  return splitmix64(record.seed ^ splitmix64(run_seed));
}

}  // namespace pamd
