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

#include "pamd/psychoacoustics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pamd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProminenceDb = 7.0;
constexpr double kDecimationBark = 0.5;

constexpr std::array<int, 1> kLowNeighborhood = {2};
constexpr std::array<int, 2> kMidNeighborhood = {2, 3};
constexpr std::array<int, 5> kHighNeighborhood = {2, 3, 4, 5, 6};

double db_to_power(double db) { return std::pow(10.0, 0.1 * db); }

}  // namespace

double absolute_threshold(double freq_hz) {
  const double khz = std::max(freq_hz, 20.0) / 1000.0;
  return 3.64 * std::pow(khz, -0.8) -
         6.5 * std::exp(-0.6 * (khz - 3.3) * (khz - 3.3)) +
         1e-3 * std::pow(khz, 4.0);
}

double absolute_threshold_capped(double freq_hz) {
  return std::min(absolute_threshold(freq_hz), 96.0);
}

double hz_to_bark(double freq_hz) {
  const double r = freq_hz / 7500.0;
  return 13.0 * std::atan(0.00076 * freq_hz) + 3.5 * std::atan(r * r);
}

BarkScale BarkScale::for_stft(int fft_size, int sample_rate) {
  if (fft_size < 2 || sample_rate <= 0) {
    throw std::invalid_argument("invalid STFT configuration for Bark scale");
  }
  BarkScale scale;
  const int bins = fft_size / 2 + 1;
  scale.bin_to_hz.resize(bins);
  scale.bin_to_bark.resize(bins);
  scale.bin_to_ath.resize(bins);
  for (int k = 0; k < bins; ++k) {
    const double hz = static_cast<double>(k) * sample_rate / fft_size;
    scale.bin_to_hz[k] = hz;
    scale.bin_to_bark[k] = hz_to_bark(hz);
    scale.bin_to_ath[k] = absolute_threshold(hz);
  }
  return scale;
}

std::span<const int> tonal_neighborhood(double bin_hz) {
  if (bin_hz < 2040.0) return kLowNeighborhood;
  if (bin_hz < 5070.0) return kMidNeighborhood;
  return kHighNeighborhood;
}

std::vector<TonalMasker> find_tonal_maskers(std::span<const double> psd_frame,
                                            const BarkScale& scale) {
  const int bins = static_cast<int>(psd_frame.size());
  if (bins != scale.num_bins()) {
    throw std::invalid_argument("PSD frame does not match Bark scale");
  }
  std::vector<TonalMasker> candidates;
  const auto& p = psd_frame;
  for (int k = 3; k <= bins - 7; ++k) {
    if (!(p[k] > p[k - 1] && p[k] >= p[k + 1])) continue;
    bool tonal = true;
    for (int delta : tonal_neighborhood(scale.bin_to_hz[k])) {
      if (!(p[k] > p[k - delta] + kProminenceDb &&
            p[k] > p[k + delta] + kProminenceDb)) {
        tonal = false;
        break;
      }
    }
    if (!tonal) continue;
    const double spl = 10.0 * std::log10(db_to_power(p[k - 1]) +
                                         db_to_power(p[k]) +
                                         db_to_power(p[k + 1]));
    if (spl < scale.bin_to_ath[k]) continue;
    candidates.push_back({k, spl, scale.bin_to_bark[k]});
  }

  // Strongest first; ties resolved toward the lower bin.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const TonalMasker& a, const TonalMasker& b) {
                     return a.spl > b.spl;
                   });
  std::vector<TonalMasker> kept;
  for (const TonalMasker& m : candidates) {
    bool crowded = std::any_of(kept.begin(), kept.end(), [&](const TonalMasker& k) {
      return std::abs(k.bark - m.bark) < kDecimationBark;
    });
    if (!crowded) kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end(),
            [](const TonalMasker& a, const TonalMasker& b) { return a.bin < b.bin; });
  return kept;
}

double spreading_function(double dz, double spl) {
  if (dz < -3.0 || dz >= 8.0) return kNegInf;
  if (dz < -1.0) return 17.0 * dz - 0.4 * spl + 11.0;
  if (dz < 0.0) return (0.4 * spl + 6.0) * dz;
  if (dz < 1.0) return -17.0 * dz;
  return (0.15 * spl - 17.0) * dz - 0.15 * spl;
}

std::vector<double> masking_curve(const TonalMasker& masker,
                                  const BarkScale& scale) {
  std::vector<double> curve(scale.num_bins(), kNegInf);
  const double apex = masker.spl - 0.275 * masker.bark - 6.025;
  for (int i = 0; i < scale.num_bins(); ++i) {
    const double sf = spreading_function(scale.bin_to_bark[i] - masker.bark, masker.spl);
    if (sf != kNegInf) curve[i] = apex + sf;
  }
  return curve;
}

std::vector<double> threshold_from_maskers(std::span<const TonalMasker> maskers,
                                           const BarkScale& scale) {
  const int bins = scale.num_bins();
  std::vector<double> masked_power(bins, 0.0);
  std::vector<bool> touched(bins, false);
  const auto& z = scale.bin_to_bark;
  for (const TonalMasker& m : maskers) {
    const double apex = m.spl - 0.275 * m.bark - 6.025;
    // Bark is increasing in bin, so the support [-3, 8) is a contiguous run.
    auto first = std::lower_bound(z.begin(), z.end(), m.bark - 3.0);
    auto last = std::lower_bound(z.begin(), z.end(), m.bark + 8.0);
    for (auto it = first; it != last; ++it) {
      const auto i = static_cast<std::size_t>(it - z.begin());
      const double sf = spreading_function(*it - m.bark, m.spl);
      if (sf == kNegInf) continue;
      masked_power[i] += db_to_power(apex + sf);
      touched[i] = true;
    }
  }
  std::vector<double> g(bins);
  for (int i = 0; i < bins; ++i) {
    const double quiet = scale.bin_to_ath[i];
    g[i] = touched[i] ? 10.0 * std::log10(db_to_power(quiet) + masked_power[i])
                      : quiet;
  }
  return g;
}

GlobalThreshold global_threshold(const PsdMatrix& psd, const BarkScale& scale) {
  if (psd.values.rows() != scale.num_bins()) {
    throw std::invalid_argument("PSD rows do not match Bark scale");
  }
  GlobalThreshold g;
  g.values.resize(psd.values.rows(), psd.values.cols());
  const auto rows = static_cast<std::size_t>(psd.values.rows());
  for (Eigen::Index t = 0; t < psd.values.cols(); ++t) {
    std::span<const double> frame(psd.values.col(t).data(), rows);
    const std::vector<TonalMasker> maskers = find_tonal_maskers(frame, scale);
    const std::vector<double> column = threshold_from_maskers(maskers, scale);
    std::copy(column.begin(), column.end(), g.values.col(t).data());
  }
  return g;
}

double perceptual_weight(double psd_db, double threshold_db) {
  // log10(10^d + 1) evaluated without overflow for large d.
  const double d = 0.1 * (psd_db - threshold_db);
  if (d > 0.0) return d + std::log1p(std::pow(10.0, -d)) / std::numbers::ln10;
  return std::log1p(std::pow(10.0, d)) / std::numbers::ln10;
}

PerceptualWeights perceptual_weights(const PsdMatrix& psd,
                                     const GlobalThreshold& threshold) {
  if (psd.values.rows() != threshold.values.rows() ||
      psd.values.cols() != threshold.values.cols()) {
    throw std::invalid_argument("PSD and threshold shapes differ");
  }
  PerceptualWeights h;
  h.values = psd.values.binaryExpr(threshold.values, [](double p, double g) {
    return perceptual_weight(p, g);
  });
  return h;
}

}  // namespace pamd
