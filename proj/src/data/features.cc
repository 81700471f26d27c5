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

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pamd/data_pipeline.h"
#include "pamd/errors.h"

namespace pamd {

namespace {

constexpr char kCacheMagic[8] = {'P', 'A', 'M', 'D', 'F', 'E', 'A', 'T'};
constexpr std::uint32_t kCacheVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t& pos) {
  if (pos + 4 > in.size()) throw DataError("feature cache truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += 4;
  return v;
}

void put_matrix(std::string& out, const RealMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(m.data()[i])));
  }
}

RealMatrix get_matrix(const std::string& in, std::size_t& pos, Eigen::Index rows,
                      Eigen::Index cols) {
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = std::bit_cast<float>(get_u32(in, pos));
  }
  return m;
}

}  // namespace

void ExampleSet::append(const ExampleSet& other) {
  if (other.size() == 0) return;
  if (size() == 0) {
    *this = other;
    return;
  }
  if (other.inputs.rows() != inputs.rows() || other.targets.rows() != targets.rows() ||
      other.weights.rows() != weights.rows()) {
    throw std::invalid_argument("cannot append examples of a different shape");
  }
  auto grow = [](RealMatrix& dst, const RealMatrix& src) {
    const Eigen::Index old = dst.cols();
    dst.conservativeResize(Eigen::NoChange, old + src.cols());
    dst.rightCols(src.cols()) = src;
  };
  grow(inputs, other.inputs);
  grow(targets, other.targets);
  if (weights.size() > 0 || other.weights.size() > 0) grow(weights, other.weights);
}

RealMatrix context_inputs(const RealMatrix& magnitude, int context_frames) {
  if (context_frames == 1) return magnitude;
  if (context_frames != 3) throw std::invalid_argument("context_frames must be 1 or 3");
  const Eigen::Index f = magnitude.rows(), t_count = magnitude.cols();
  RealMatrix out(3 * f, t_count);
  for (Eigen::Index t = 0; t < t_count; ++t) {
    out.col(t).segment(0, f) = magnitude.col(std::max<Eigen::Index>(t - 1, 0));
    out.col(t).segment(f, f) = magnitude.col(t);
    out.col(t).segment(2 * f, f) = magnitude.col(std::min(t + 1, t_count - 1));
  }
  return out;
}

ExampleSet build_examples(const UtteranceFeatures& features, int context_frames) {
  if (features.num_frames() < 1) throw DataError("utterance shorter than one frame");
  if (features.irm.cols() != features.num_frames() ||
      (features.weights.size() > 0 && features.weights.cols() != features.num_frames())) {
    throw std::invalid_argument("feature matrices are not frame-aligned");
  }
  ExampleSet set;
  set.inputs = context_inputs(features.mixture_magnitude, context_frames);
  set.targets = features.irm;
  set.weights = features.weights;
  return set;
}

std::vector<std::vector<std::size_t>> batch_iterator(std::size_t num_examples,
                                                     std::size_t batch_size,
                                                     std::uint64_t seed,
                                                     std::uint64_t epoch) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  std::vector<std::size_t> order(num_examples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  for (std::size_t i = num_examples; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < num_examples; start += batch_size) {
    const std::size_t end = std::min(start + batch_size, num_examples);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

void write_feature_cache(const std::string& path, const UtteranceFeatures& features) {
  const Eigen::Index rows = features.mixture_magnitude.rows();
  const Eigen::Index cols = features.mixture_magnitude.cols();
  if (features.irm.rows() != rows || features.irm.cols() != cols ||
      features.weights.rows() != rows || features.weights.cols() != cols) {
    throw std::invalid_argument("feature matrices differ in shape");
  }
  std::string out(kCacheMagic, sizeof(kCacheMagic));
  put_u32(out, kCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  put_matrix(out, features.mixture_magnitude);
  put_matrix(out, features.irm);
  put_matrix(out, features.weights);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("short write to " + path);
}

UtteranceFeatures read_feature_cache(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open " + path);
  std::string in((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (in.size() < sizeof(kCacheMagic) ||
      std::memcmp(in.data(), kCacheMagic, sizeof(kCacheMagic)) != 0) {
    throw DataError(path + ": not a feature cache");
  }
  std::size_t pos = sizeof(kCacheMagic);
  if (get_u32(in, pos) != kCacheVersion) throw DataError(path + ": unsupported cache version");
  const Eigen::Index rows = get_u32(in, pos);
  const Eigen::Index cols = get_u32(in, pos);
  if (in.size() != pos + 3 * 4 * static_cast<std::size_t>(rows * cols)) {
    throw DataError(path + ": cache size does not match its shape header");
  }
  UtteranceFeatures f;
  f.mixture_magnitude = get_matrix(in, pos, rows, cols);
  f.irm = get_matrix(in, pos, rows, cols);
  f.weights = get_matrix(in, pos, rows, cols);
  return f;
}

std::uint64_t content_hash(const AudioSignal& clean, const AudioSignal& noise,
                           std::uint64_t seed, double snr_db) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (const AudioSignal* s : {&clean, &noise}) {
    mix(static_cast<std::uint64_t>(s->sample_rate));
    mix(s->samples.size());
    for (double v : s->samples) mix(std::bit_cast<std::uint64_t>(v));
  }
  mix(seed);
  mix(std::bit_cast<std::uint64_t>(snr_db));
  return h;
}

}  // namespace pamd
