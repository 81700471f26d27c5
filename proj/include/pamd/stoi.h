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

#ifndef PAMD_STOI_H_
#define PAMD_STOI_H_

#include <vector>

#include "pamd/audio.h"
#include "pamd/stft.h"

namespace pamd {

struct StoiParams {
  int sample_rate = 10000;
  int frame_len = 256;
  int fft_size = 512;
  int num_bands = 15;
  double min_freq = 150.0;
  int segment_len = 30;
  double beta_db = -15.0;
  double dynamic_range_db = 40.0;
};

// One-third-octave band matrix (num_bands x (fft_size / 2 + 1)) of 0/1
// entries.
RealMatrix third_octave_bands(const StoiParams& params = {});

// Drops frames of both signals whose clean-frame energy is more than the
// dynamic range below the loudest clean frame and re-synthesizes by
// overlap-add.
void remove_silent_frames(std::vector<double>& clean, std::vector<double>& processed,
                          const StoiParams& params = {});

// Short-time objective intelligibility. Inputs are resampled to 10 kHz when
// needed. Throws DataError("insufficient speech") when fewer than one
// segment of active frames remain.
double stoi(const AudioSignal& clean, const AudioSignal& processed,
            const StoiParams& params = {});

}  // namespace pamd

#endif  // PAMD_STOI_H_
