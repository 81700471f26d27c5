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

#ifndef PAMD_AUDIO_H_
#define PAMD_AUDIO_H_

#include <string>
#include <vector>

namespace pamd {

inline constexpr int kSampleRate = 16000;

// Mono time-domain signal with amplitudes nominally in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  // Throws std::invalid_argument if sample_rate <= 0 or any sample is not
  // finite.
  void validate() const;
};

// Reads a RIFF/WAVE file holding 16-bit signed PCM mono audio. Samples are
// divided by 32768. Any other encoding or channel count throws DataError.
AudioSignal read_wav(const std::string& path);

// Writes 16-bit PCM mono. Samples are scaled by 32768, rounded and clamped.
void write_wav(const std::string& path, const AudioSignal& signal);

double signal_power(const std::vector<double>& samples);

}  // namespace pamd

#endif  // PAMD_AUDIO_H_
