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

#include "pamd/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "json.hpp"
#include "pamd/errors.h"

namespace pamd {

namespace {

constexpr char kMagic[8] = {'P', 'A', 'M', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > in.size()) {
    throw DataError("checkpoint truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += static_cast<std::size_t>(bytes);
  return v;
}

void put_double(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v), 8); }

double get_double(const std::string& in, std::size_t& pos) {
  return std::bit_cast<double>(get_le(in, pos, 8));
}

nlohmann::json config_to_json(const TrainingConfig& c) {
  return {{"topology", c.topology},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"use_perceptual_weights", c.use_perceptual_weights},
          {"keep_prob", c.dropout.keep_prob},
          {"dropout_seed", c.dropout.rng_seed},
          {"context_frames", c.context_frames}};
}

TrainingConfig config_from_json(const nlohmann::json& j) {
  TrainingConfig c;
  c.topology = j.at("topology").get<std::vector<int>>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.use_perceptual_weights = j.at("use_perceptual_weights").get<bool>();
  c.dropout.keep_prob = j.at("keep_prob").get<std::vector<double>>();
  c.dropout.rng_seed = j.at("dropout_seed").get<std::uint64_t>();
  c.context_frames = j.at("context_frames").get<int>();
  return c;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  const NetworkParams& params = checkpoint.params;
  params.validate();
  if (checkpoint.config.topology != params.topology) {
    throw std::invalid_argument("checkpoint config topology differs from parameters");
  }
  nlohmann::json header = {{"format", "row-major float64 little-endian"},
                           {"topology", params.topology},
                           {"config", config_to_json(checkpoint.config)},
                           {"rng_seed", checkpoint.config.seed}};
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_le(out, kVersion, 4);
  put_le(out, text.size(), 8);
  out += text;
  for (const Layer& layer : params.layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) put_double(out, layer.weight(r, c));
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) put_double(out, layer.bias(r));
  }
  return out;
}

Checkpoint parse_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a checkpoint file");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = get_le(bytes, pos, 4);
  if (version != kVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = get_le(bytes, pos, 8);
  if (pos + header_len > bytes.size()) throw DataError("checkpoint truncated");

  Checkpoint ck;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(pos, header_len));
    ck.params.topology = header.at("topology").get<std::vector<int>>();
    ck.config = config_from_json(header.at("config"));
    ck.config.seed = header.at("rng_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad checkpoint header: ") + e.what());
  }
  pos += header_len;

  const auto& topo = ck.params.topology;
  if (topo.size() < 2 || ck.config.topology != topo) {
    throw DataError("checkpoint topology is inconsistent");
  }
  std::size_t expected = 0;
  for (std::size_t i = 0; i + 1 < topo.size(); ++i) {
    if (topo[i] < 1 || topo[i + 1] < 1) throw DataError("checkpoint topology is inconsistent");
    expected += static_cast<std::size_t>(topo[i + 1]) * (static_cast<std::size_t>(topo[i]) + 1);
  }
  if (bytes.size() - pos != expected * 8) {
    throw DataError("checkpoint parameter block does not match its topology");
  }
  for (std::size_t i = 0; i + 1 < topo.size(); ++i) {
    Layer layer;
    layer.weight.resize(topo[i + 1], topo[i]);
    layer.bias.resize(topo[i + 1]);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = get_double(bytes, pos);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = get_double(bytes, pos);
    ck.params.layers.push_back(std::move(layer));
  }
  try {
    ck.params.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid checkpoint: ") + e.what());
  }
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  const std::string bytes = serialize_checkpoint(checkpoint);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("short write to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace pamd
