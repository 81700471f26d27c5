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

#ifndef PAMD_RESAMPLE_H_
#define PAMD_RESAMPLE_H_

#include <vector>

namespace pamd {

// Polyphase rational resampler by up/down with an odd-length low-pass
// filter whose group delay is compensated. Output length is
// ceil(n * up / down). The filter is scaled by `up` before use.
std::vector<double> resample_poly(const std::vector<double>& x, int up, int down,
                                  const std::vector<double>& filter);

// Same, with a Kaiser-windowed sinc (beta 5, 10 * max(up, down) taps per
// side, cutoff at the lower Nyquist rate, unit DC gain).
std::vector<double> resample_poly(const std::vector<double>& x, int up, int down);

// Kaiser-windowed sinc matching Octave's resample() design (60 dB
// rejection, roll-off a tenth of the cutoff), normalized to unit sum.
std::vector<double> octave_resample_filter(int up, int down);

}  // namespace pamd

#endif  // PAMD_RESAMPLE_H_
