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

#include "pamd/stoi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pamd/errors.h"
#include "pamd/fft.h"
#include "pamd/resample.h"

namespace pamd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric Hann of length n + 2 with both zero end points removed.
std::vector<double> inner_hann(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (n + 1));
  }
  return w;
}

std::vector<double> to_rate(const AudioSignal& s, int rate) {
  if (s.sample_rate == rate) return s.samples;
  return resample_poly(s.samples, rate, s.sample_rate, octave_resample_filter(rate, s.sample_rate));
}

// |rfft|^2 of windowed frames starting at 0, hop, ... while start < len - frame.
RealMatrix frame_power(const std::vector<double>& x, const StoiParams& p) {
  const int hop = p.frame_len / 2;
  const long len = static_cast<long>(x.size());
  std::vector<long> starts;
  for (long i = 0; i < len - p.frame_len; i += hop) starts.push_back(i);
  const std::vector<double> w = inner_hann(p.frame_len);
  RealFft fft(p.fft_size);
  std::vector<double> frame(p.fft_size, 0.0);
  std::vector<std::complex<double>> bins(fft.num_bins());
  RealMatrix power(fft.num_bins(), static_cast<Eigen::Index>(starts.size()));
  for (std::size_t t = 0; t < starts.size(); ++t) {
    for (int n = 0; n < p.frame_len; ++n) frame[n] = w[n] * x[starts[t] + n];
    fft.forward(frame, bins);
    for (int k = 0; k < fft.num_bins(); ++k) power(k, static_cast<Eigen::Index>(t)) = std::norm(bins[k]);
  }
  return power;
}

}  // namespace

RealMatrix third_octave_bands(const StoiParams& p) {
  const int bins = p.fft_size / 2 + 1;
  std::vector<double> f(bins);
  for (int k = 0; k < bins; ++k) f[k] = static_cast<double>(k) * p.sample_rate / p.fft_size;
  auto nearest = [&](double hz) {
    int best = 0;
    for (int k = 1; k < bins; ++k) {
      if ((f[k] - hz) * (f[k] - hz) < (f[best] - hz) * (f[best] - hz)) best = k;
    }
    return best;
  };
  RealMatrix obm = RealMatrix::Zero(p.num_bands, bins);
  for (int i = 0; i < p.num_bands; ++i) {
    const int lo = nearest(p.min_freq * std::pow(2.0, (2.0 * i - 1.0) / 6.0));
    const int hi = nearest(p.min_freq * std::pow(2.0, (2.0 * i + 1.0) / 6.0));
    for (int k = lo; k < hi; ++k) obm(i, k) = 1.0;
  }
  return obm;
}

void remove_silent_frames(std::vector<double>& clean, std::vector<double>& processed,
                          const StoiParams& p) {
  if (clean.size() != processed.size()) {
    throw std::invalid_argument("clean and processed signals differ in length");
  }
  const int len = p.frame_len, hop = p.frame_len / 2;
  const std::vector<double> w = inner_hann(len);
  std::vector<long> starts;
  for (long i = 0; i + len <= static_cast<long>(clean.size()); i += hop) starts.push_back(i);
  std::vector<double> energy_db(starts.size());
  for (std::size_t t = 0; t < starts.size(); ++t) {
    double e = 0.0;
    for (int n = 0; n < len; ++n) {
      const double v = w[n] * clean[starts[t] + n];
      e += v * v;
    }
    energy_db[t] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double loudest = energy_db.empty()
                             ? 0.0
                             : *std::max_element(energy_db.begin(), energy_db.end());
  std::vector<long> kept;
  for (std::size_t t = 0; t < starts.size(); ++t) {
    if (loudest - p.dynamic_range_db - energy_db[t] < 0.0) kept.push_back(starts[t]);
  }
  const std::size_t out_len = kept.empty() ? 0 : (kept.size() - 1) * hop + len;
  std::vector<double> x(out_len, 0.0), y(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    for (int n = 0; n < len; ++n) {
      x[j * hop + n] += w[n] * clean[kept[j] + n];
      y[j * hop + n] += w[n] * processed[kept[j] + n];
    }
  }
  clean = std::move(x);
  processed = std::move(y);
}

double stoi(const AudioSignal& clean, const AudioSignal& processed, const StoiParams& p) {
  if (clean.size() != processed.size()) {
    throw std::invalid_argument("clean and processed signals differ in length");
  }
  if (clean.sample_rate != processed.sample_rate) {
    throw std::invalid_argument("clean and processed sample rates differ");
  }
  std::vector<double> x = to_rate(clean, p.sample_rate);
  std::vector<double> y = to_rate(processed, p.sample_rate);
  remove_silent_frames(x, y, p);

  const RealMatrix obm = third_octave_bands(p);
  const RealMatrix x_spec = frame_power(x, p);
  const RealMatrix y_spec = frame_power(y, p);
  if (x_spec.cols() < p.segment_len) throw DataError("insufficient speech");
  const RealMatrix x_tob = (obm * x_spec).cwiseSqrt();
  const RealMatrix y_tob = (obm * y_spec).cwiseSqrt();

  const double clip = std::pow(10.0, -p.beta_db / 20.0);
  const Eigen::Index n = p.segment_len;
  const Eigen::Index segments = x_tob.cols() - n + 1;
  double total = 0.0;
  for (Eigen::Index m = 0; m < segments; ++m) {
    for (Eigen::Index band = 0; band < x_tob.rows(); ++band) {
      Eigen::VectorXd xs = x_tob.row(band).segment(m, n).transpose();
      Eigen::VectorXd ys = y_tob.row(band).segment(m, n).transpose();
      const double scale = xs.norm() / (ys.norm() + kEps);
      ys = (ys * scale).cwiseMin(xs * (1.0 + clip));
      ys.array() -= ys.mean();
      xs.array() -= xs.mean();
      ys /= ys.norm() + kEps;
      xs /= xs.norm() + kEps;
      total += xs.dot(ys);
    }
  }
  return total / static_cast<double>(segments * x_tob.rows());
}

}  // namespace pamd
