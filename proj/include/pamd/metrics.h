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

#ifndef PAMD_METRICS_H_
#define PAMD_METRICS_H_

#include <vector>

#include "pamd/audio.h"

namespace pamd {

inline constexpr double kMetricCapDb = 100.0;

// Projection-only decomposition of an estimate against the clean speech and
// the noise reference (no distortion filters).
struct BssComponents {
  std::vector<double> target;        // projection onto the speech reference
  std::vector<double> interference;  // rest of the projection onto both refs
  std::vector<double> artifacts;     // orthogonal remainder
};

struct BssScores {
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double sar_db = 0.0;
};

// Throws std::invalid_argument on length mismatch and DataError when a
// reference has zero energy.
BssComponents bss_components(const AudioSignal& estimate, const AudioSignal& ref_speech,
                             const AudioSignal& ref_noise);
BssScores bss_decompose(const AudioSignal& estimate, const AudioSignal& ref_speech,
                        const AudioSignal& ref_noise);

double si_sdr(const AudioSignal& estimate, const AudioSignal& reference);

// 10 log10(num / den) clamped to [-100, 100] dB. A zero numerator gives
// -100 dB, otherwise a zero denominator gives +100 dB.
double capped_ratio_db(double num, double den);

}  // namespace pamd

#endif  // PAMD_METRICS_H_
