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

#include "pamd/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pamd/errors.h"
#include "pamd/fft.h"

namespace pamd {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_frame_params(int fft_size, int hop) {
  if (!is_power_of_two(fft_size) || fft_size < 4) {
    throw std::invalid_argument("fft_size must be a power of two >= 4");
  }
  if (hop != fft_size / 4) {
    throw std::invalid_argument("hop must be fft_size / 4");
  }
}

}  // namespace

void Spectrogram::validate() const {
  check_frame_params(fft_size, hop);
  if (data.rows() != fft_size / 2 + 1) {
    throw std::invalid_argument("spectrogram rows do not match fft_size");
  }
  if (data.cols() < 1) throw std::invalid_argument("spectrogram has no frames");
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
}

std::vector<double> hann_window(int size) {
  std::vector<double> w(size);
  for (int n = 0; n < size; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / size);
  }
  return w;
}

Spectrogram stft(const AudioSignal& signal, int fft_size, int hop) {
  check_frame_params(fft_size, hop);
  signal.validate();
  const auto len = static_cast<long>(signal.size());
  if (len < fft_size) throw DataError("signal too short");
  const long frames = (len - fft_size) / hop + 1;

  Spectrogram spec;
  spec.fft_size = fft_size;
  spec.hop = hop;
  spec.sample_rate = signal.sample_rate;
  spec.data.resize(fft_size / 2 + 1, frames);

  const std::vector<double> window = hann_window(fft_size);
  RealFft fft(fft_size);
  std::vector<double> frame(fft_size);
  for (long t = 0; t < frames; ++t) {
    const double* src = signal.samples.data() + t * hop;
    for (int n = 0; n < fft_size; ++n) frame[n] = src[n] * window[n];
    fft.forward(frame, {spec.data.col(t).data(),
                        static_cast<std::size_t>(spec.data.rows())});
  }
  return spec;
}

std::vector<double> overlap_window_energy(int num_frames, int fft_size,
                                          int hop) {
  const std::vector<double> window = hann_window(fft_size);
  std::vector<double> energy(static_cast<std::size_t>(num_frames - 1) * hop + fft_size, 0.0);
  for (int t = 0; t < num_frames; ++t) {
    for (int n = 0; n < fft_size; ++n) {
      energy[static_cast<std::size_t>(t) * hop + n] += window[n] * window[n];
    }
  }
  return energy;
}

AudioSignal istft(const Spectrogram& spec) {
  spec.validate();
  const int n_fft = spec.fft_size;
  const int frames = spec.num_frames();
  const std::vector<double> window = hann_window(n_fft);

  AudioSignal out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(static_cast<std::size_t>(frames - 1) * spec.hop + n_fft, 0.0);

  RealFft fft(n_fft);
  std::vector<double> frame(n_fft);
  Eigen::VectorXcd column;
  for (int t = 0; t < frames; ++t) {
    column = spec.data.col(t);
    fft.inverse({column.data(), static_cast<std::size_t>(column.size())}, frame);
    double* dst = out.samples.data() + static_cast<std::size_t>(t) * spec.hop;
    for (int n = 0; n < n_fft; ++n) dst[n] += frame[n] * window[n];
  }

  const std::vector<double> energy = overlap_window_energy(frames, n_fft, spec.hop);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = energy[i] > 1e-10 ? out.samples[i] / energy[i] : 0.0;
  }
  return out;
}

RealMatrix magnitude(const Spectrogram& spec) { return spec.data.cwiseAbs(); }

double power_to_spl(double power) {
  return kSplOffsetDb + 10.0 * std::log10(std::max(power, kPowerFloor));
}

PsdMatrix power_spectral_density(const Spectrogram& spec) {
  PsdMatrix psd;
  psd.values = spec.data.cwiseAbs2().unaryExpr(
      [](double p) { return power_to_spl(p); });
  return psd;
}

}  // namespace pamd
