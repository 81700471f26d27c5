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

#include "pamd/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace pamd {

namespace {

constexpr double kKaiserBeta = 5.0;

// Kaiser-windowed sinc with 2 * half_len + 1 taps; `cutoff` is relative to
// Nyquist. Not normalized.
std::vector<double> kaiser_sinc(long half_len, double cutoff, double beta) {
  const long taps = 2 * half_len + 1;
  const double norm = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(static_cast<std::size_t>(taps));
  for (long i = 0; i < taps; ++i) {
    const double m = static_cast<double>(i - half_len);
    const double x = cutoff * m;
    const double sinc = m == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double r = taps == 1 ? 0.0 : 2.0 * static_cast<double>(i) / static_cast<double>(taps - 1) - 1.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    h[static_cast<std::size_t>(i)] = cutoff * sinc * w;
  }
  return h;
}

std::vector<double> unit_sum(std::vector<double> h) {
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace

std::vector<double> resample_poly(const std::vector<double>& x, int up, int down,
                                  const std::vector<double>& filter) {
  if (up < 1 || down < 1) throw std::invalid_argument("resampling factors must be positive");
  if (filter.size() % 2 == 0) throw std::invalid_argument("resampling filter length must be odd");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return x;

  std::vector<double> h = filter;
  for (double& v : h) v *= up;
  const long half_len = static_cast<long>(h.size() - 1) / 2;
  const auto n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  const long len_h = static_cast<long>(h.size());
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    // Position in the zero-stuffed stream, shifted by the filter delay.
    const long p = m * down + half_len;
    const long n_lo = p - len_h + 1 <= 0 ? 0 : (p - len_h + 1 + up - 1) / up;
    const long n_hi = std::min(n_in - 1, p / up);
    double acc = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
      acc += x[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(p - n * up)];
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return y;
}

std::vector<double> resample_poly(const std::vector<double>& x, int up, int down) {
  if (up < 1 || down < 1) throw std::invalid_argument("resampling factors must be positive");
  const int g = std::gcd(up, down);
  const int max_rate = std::max(up, down) / g;
  return resample_poly(x, up, down,
                       unit_sum(kaiser_sinc(10L * max_rate, 1.0 / max_rate, kKaiserBeta)));
}

std::vector<double> octave_resample_filter(int up, int down) {
  if (up < 1 || down < 1) throw std::invalid_argument("resampling factors must be positive");
  const int g = std::gcd(up, down);
  const double p = up / g, q = down / g;
  const double cutoff = 1.0 / (2.0 * std::max(p, q));
  const double roll_off = cutoff / 10.0;
  const double rejection_db = 60.0;
  const auto half_len = static_cast<long>(std::ceil((rejection_db - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (rejection_db - 8.7);
  return unit_sum(kaiser_sinc(half_len, 2.0 * cutoff, beta));
}

}  // namespace pamd
