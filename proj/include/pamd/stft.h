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

#ifndef PAMD_STFT_H_
#define PAMD_STFT_H_

#include <Eigen/Dense>
#include <vector>

#include "pamd/audio.h"

namespace pamd {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kFftSize = 1024;
inline constexpr int kHopSize = kFftSize / 4;
inline constexpr int kNumBins = kFftSize / 2 + 1;

// dB offset mapping unit spectral power to sound pressure level.
inline constexpr double kSplOffsetDb = 90.302;
// Power floor applied before taking logarithms.
inline constexpr double kPowerFloor = 1e-12;

// Complex STFT with frequency bins as rows and frames as columns.
struct Spectrogram {
  ComplexMatrix data;
  int fft_size = kFftSize;
  int hop = kHopSize;
  int sample_rate = kSampleRate;

  int num_bins() const { return static_cast<int>(data.rows()); }
  int num_frames() const { return static_cast<int>(data.cols()); }
  // Throws std::invalid_argument when the shape does not match fft_size or
  // the hop is not a quarter of the frame.
  void validate() const;
};

// Sound-pressure-level power spectrum in dB, same layout as Spectrogram.
struct PsdMatrix {
  RealMatrix values;
  double reference_offset = kSplOffsetDb;
};

// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann_window(int size);

// Frame t covers samples [t * hop, t * hop + fft_size). No padding; a
// trailing partial frame is dropped. Throws DataError("signal too short")
// when the signal holds less than one frame.
Spectrogram stft(const AudioSignal& signal, int fft_size = kFftSize,
                 int hop = kHopSize);

// Weighted overlap-add with the analysis window, normalized by the summed
// squared window. Output length is (T - 1) * hop + fft_size. Samples where
// the squared-window sum vanishes are set to zero.
AudioSignal istft(const Spectrogram& spec);

// Summed squared synthesis window per output sample of istft.
std::vector<double> overlap_window_energy(int num_frames, int fft_size,
                                          int hop);

RealMatrix magnitude(const Spectrogram& spec);

// P = 90.302 + 10 log10(max(|S|^2, 1e-12)).
PsdMatrix power_spectral_density(const Spectrogram& spec);
double power_to_spl(double power);

}  // namespace pamd

#endif  // PAMD_STFT_H_
