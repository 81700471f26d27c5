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

#ifndef PAMD_DESK_CORPUS_H_
#define PAMD_DESK_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pamd/audio.h"
#include "pamd/data_pipeline.h"

namespace pamd {

// Synthetic voiced speech: syllables of harmonic tones with gliding pitch,
// shaped by three formant resonances, separated by short pauses, with an
// occasional unvoiced (high-pass noise) segment.
AudioSignal synth_speech(double seconds, std::uint64_t seed, int sample_rate = kSampleRate);

enum class NoiseType { kWhite, kPink, kBabble, kModulated };
inline constexpr int kNumNoiseTypes = 4;
std::string noise_type_name(NoiseType type);

AudioSignal synth_noise(NoiseType type, double seconds, std::uint64_t seed,
                        int sample_rate = kSampleRate);

struct DeskCorpusSpec {
  int train = 20;
  int val = 4;
  int test = 6;
  double min_seconds = 2.0;
  double max_seconds = 2.5;
  double noise_seconds = 6.0;
  std::uint64_t seed = 1;
};

// Writes speech and noise WAVs plus manifest.tsv into `dir` and returns the
// records. Each split has its own noise files, one per noise type, so test
// noise never appears in training mixtures.
std::vector<UtteranceRecord> write_desk_corpus(const std::string& dir,
                                               const DeskCorpusSpec& spec);

}  // namespace pamd

#endif  // PAMD_DESK_CORPUS_H_
