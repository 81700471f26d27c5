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

#ifndef PAMD_PSYCHOACOUSTICS_H_
#define PAMD_PSYCHOACOUSTICS_H_

#include <span>
#include <vector>

#include "pamd/stft.h"

namespace pamd {

// Absolute threshold of hearing in dB SPL. Frequencies below 20 Hz are
// clamped to 20 Hz.
double absolute_threshold(double freq_hz);

// Display/export variant capped at 96 dB. The threshold computation itself
// never uses the cap.
double absolute_threshold_capped(double freq_hz);

// Critical-band rate z(f) = 13 atan(0.00076 f) + 3.5 atan((f / 7500)^2).
double hz_to_bark(double freq_hz);

// Per-bin frequency and Bark position for one STFT configuration.
struct BarkScale {
  std::vector<double> bin_to_hz;
  std::vector<double> bin_to_bark;
  std::vector<double> bin_to_ath;

  static BarkScale for_stft(int fft_size = kFftSize,
                            int sample_rate = kSampleRate);
  int num_bins() const { return static_cast<int>(bin_to_hz.size()); }
};

struct TonalMasker {
  int bin = 0;
  double spl = 0.0;   // dB SPL of bins bin-1..bin+1 combined
  double bark = 0.0;
};

// Offsets that a candidate at `bin` must exceed by 7 dB. The table is laid
// out for 15.625 Hz bins and keyed on frequency: {2} below ~2 kHz, {2, 3}
// up to ~5.06 kHz, {2..6} above.
std::span<const int> tonal_neighborhood(double bin_hz);

// Local maxima passing the +7 dB prominence test, kept only when at or
// above the threshold in quiet, then decimated so that no two survivors lie
// within 0.5 Bark (the stronger one wins). Sorted by bin.
std::vector<TonalMasker> find_tonal_maskers(std::span<const double> psd_frame,
                                            const BarkScale& scale);

// Individual masking threshold of one tonal masker over all bins, in dB SPL.
// Bins outside [-3, 8) Bark of the masker are -infinity.
std::vector<double> masking_curve(const TonalMasker& masker,
                                  const BarkScale& scale);

// Spreading function value for a Bark distance, piecewise in four segments.
// Returns -infinity outside [-3, 8).
double spreading_function(double delta_bark, double masker_spl);

// Power sum of the threshold in quiet and every masker's curve, in dB SPL.
// With no contributing masker at a bin the result is the threshold in quiet
// bit-for-bit.
std::vector<double> threshold_from_maskers(std::span<const TonalMasker> maskers,
                                           const BarkScale& scale);

struct GlobalThreshold {
  RealMatrix values;
};

struct PerceptualWeights {
  RealMatrix values;
};

// Frame-by-frame global masking threshold. Frames are independent.
GlobalThreshold global_threshold(const PsdMatrix& psd, const BarkScale& scale);

// H = log10(10^(0.1 P) / 10^(0.1 G) + 1), element-wise.
PerceptualWeights perceptual_weights(const PsdMatrix& psd,
                                     const GlobalThreshold& threshold);
double perceptual_weight(double psd_db, double threshold_db);

}  // namespace pamd

#endif  // PAMD_PSYCHOACOUSTICS_H_
