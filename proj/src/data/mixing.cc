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

#include <cmath>
#include <random>

#include "pamd/data_pipeline.h"
#include "pamd/errors.h"
#include "pamd/psychoacoustics.h"

namespace pamd {

MixResult mix_at_snr(const AudioSignal& clean, const AudioSignal& noise,
                     double snr_db, std::uint64_t seed) {
  clean.validate();
  noise.validate();
  if (clean.sample_rate != noise.sample_rate) {
    throw DataError("clean and noise sample rates differ");
  }
  if (clean.samples.empty() || noise.samples.empty()) {
    throw DataError("empty signal: SNR is undefined");
  }
  const double clean_power = signal_power(clean.samples);
  if (!(clean_power > 0.0)) throw DataError("silent clean signal: SNR is undefined");

  MixResult mix;
  const std::size_t len = clean.size();
  const std::size_t noise_len = noise.size();
  std::vector<double> fitted(len);
  if (noise_len > len) {
    std::mt19937_64 rng(seed);
    mix.noise_offset = static_cast<std::size_t>(rng() % (noise_len - len + 1));
    std::copy_n(noise.samples.begin() + static_cast<std::ptrdiff_t>(mix.noise_offset), len,
                fitted.begin());
  } else {
    for (std::size_t i = 0; i < len; ++i) fitted[i] = noise.samples[i % noise_len];
  }
  const double noise_power = signal_power(fitted);
  if (!(noise_power > 0.0)) throw DataError("silent noise segment: SNR is undefined");

  mix.noise_gain = std::sqrt(clean_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  mix.scaled_noise.sample_rate = clean.sample_rate;
  mix.scaled_noise.samples.resize(len);
  mix.mixture.sample_rate = clean.sample_rate;
  mix.mixture.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    mix.scaled_noise.samples[i] = fitted[i] * mix.noise_gain;
    mix.mixture.samples[i] = clean.samples[i] + mix.scaled_noise.samples[i];
  }
  mix.achieved_snr_db =
      10.0 * std::log10(clean_power / signal_power(mix.scaled_noise.samples));
  return mix;
}

IrmMask compute_irm(const Spectrogram& clean, const Spectrogram& noise) {
  if (clean.data.rows() != noise.data.rows() || clean.data.cols() != noise.data.cols()) {
    throw std::invalid_argument("clean and noise spectrograms differ in shape");
  }
  IrmMask irm;
  const RealMatrix s2 = clean.data.cwiseAbs2();
  const RealMatrix n2 = noise.data.cwiseAbs2();
  irm.values = s2.binaryExpr(n2, [](double s, double n) {
    return s / std::max(s + n, kPowerFloor);
  });
  return irm;
}

PreparedUtterance prepare_utterance(const AudioSignal& clean, const AudioSignal& noise,
                                    double snr_db, std::uint64_t seed, bool with_weights) {
  PreparedUtterance out;
  out.mix = mix_at_snr(clean, noise, snr_db, seed);
  out.clean = clean;
  const Spectrogram clean_spec = stft(clean);
  const Spectrogram noise_spec = stft(out.mix.scaled_noise);
  out.mixture_spec = stft(out.mix.mixture);
  out.features.mixture_magnitude = magnitude(out.mixture_spec);
  out.features.irm = compute_irm(clean_spec, noise_spec).values;
  if (with_weights) {
    static const BarkScale scale = BarkScale::for_stft(kFftSize, kSampleRate);
    const BarkScale local = clean.sample_rate == kSampleRate
                                ? scale
                                : BarkScale::for_stft(kFftSize, clean.sample_rate);
    const PsdMatrix psd = power_spectral_density(clean_spec);
    out.features.weights = perceptual_weights(psd, global_threshold(psd, local)).values;
  }
  return out;
}

}  // namespace pamd
