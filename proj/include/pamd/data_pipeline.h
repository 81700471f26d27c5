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

#ifndef PAMD_DATA_PIPELINE_H_
#define PAMD_DATA_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pamd/audio.h"
#include "pamd/stft.h"

namespace pamd {

// ---------------------------------------------------------------------------
// Mixing

struct MixResult {
  AudioSignal mixture;
  AudioSignal scaled_noise;
  double noise_gain = 1.0;
  std::size_t noise_offset = 0;
  double achieved_snr_db = 0.0;
};

// Fits the noise to the clean length (looped when shorter, cropped at a
// seeded random offset when longer), then scales it so that
// 10 log10(P_clean / P_noise) == snr_db. Throws DataError for silent
// inputs or mismatched sample rates.
MixResult mix_at_snr(const AudioSignal& clean, const AudioSignal& noise,
                     double snr_db, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Targets

struct IrmMask {
  RealMatrix values;
};

// |S|^2 / max(|S|^2 + |N|^2, 1e-12). Zero where both sources are silent.
IrmMask compute_irm(const Spectrogram& clean, const Spectrogram& noise);

// Per-utterance matrices consumed by training and evaluation, F x T each.
struct UtteranceFeatures {
  RealMatrix mixture_magnitude;
  RealMatrix irm;
  RealMatrix weights;  // perceptual weights of the clean spectrogram

  Eigen::Index num_frames() const { return mixture_magnitude.cols(); }
};

struct PreparedUtterance {
  MixResult mix;
  AudioSignal clean;
  Spectrogram mixture_spec;
  UtteranceFeatures features;
};

// Mixes at snr_db, runs the STFTs and computes the IRM and, when requested,
// the perceptual weights from the clean spectrogram.
PreparedUtterance prepare_utterance(const AudioSignal& clean,
                                    const AudioSignal& noise, double snr_db,
                                    std::uint64_t seed, bool with_weights = true);

// ---------------------------------------------------------------------------
// Examples and batching

// Column-aligned training examples.
struct ExampleSet {
  RealMatrix inputs;   // (F * context) x N
  RealMatrix targets;  // F x N
  RealMatrix weights;  // F x N

  Eigen::Index size() const { return inputs.cols(); }
  void append(const ExampleSet& other);
};

// Network input for frame t: the magnitude column itself, or for context 3
// the columns t-1, t, t+1 stacked with edge frames replicated.
RealMatrix context_inputs(const RealMatrix& magnitude, int context_frames);

// One example per frame; target and weight are the centre frame's columns.
ExampleSet build_examples(const UtteranceFeatures& features, int context_frames);

// Shuffled index batches over [0, num_examples). The permutation depends only
// on (seed, epoch); the final batch may be short.
std::vector<std::vector<std::size_t>> batch_iterator(std::size_t num_examples,
                                                     std::size_t batch_size,
                                                     std::uint64_t seed,
                                                     std::uint64_t epoch);

// ---------------------------------------------------------------------------
// Manifests and feature cache

enum class Split { kTrain, kVal, kTest };
std::string split_name(Split split);
Split parse_split(const std::string& name);

struct UtteranceRecord {
  Split split = Split::kTrain;
  std::string clean_path;
  std::string noise_path;
  std::uint64_t seed = 0;

  // Stable identifier used in reports: the clean file stem plus the line
  // index in the manifest.
  std::string id;
};

// One record per line: split, clean path, noise path and seed separated by
// tabs (or whitespace when the line has no tab). Blank lines and lines
// starting with '#' are skipped. Relative paths are resolved against the
// manifest's directory.
std::vector<UtteranceRecord> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<UtteranceRecord>& records);
std::vector<UtteranceRecord> filter_split(const std::vector<UtteranceRecord>& records,
                                          Split split);

// Mixing seed for a record under a run-wide seed.
std::uint64_t mixing_seed(const UtteranceRecord& record, std::uint64_t run_seed);

// Binary per-utterance cache of |X|, M and H as 32-bit floats behind a
// shape header.
void write_feature_cache(const std::string& path, const UtteranceFeatures& features);
UtteranceFeatures read_feature_cache(const std::string& path);

// FNV-1a over the audio content and mixing parameters; names cache files.
std::uint64_t content_hash(const AudioSignal& clean, const AudioSignal& noise,
                           std::uint64_t seed, double snr_db);

}  // namespace pamd

#endif  // PAMD_DATA_PIPELINE_H_
