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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pamd/errors.h"
#include "pamd/metrics.h"

namespace pamd {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double energy(const std::vector<double>& a) { return dot(a, a); }

}  // namespace

double capped_ratio_db(double num, double den) {
  if (!(num > 0.0)) return -kMetricCapDb;
  if (!(den > 0.0)) return kMetricCapDb;
  return std::clamp(10.0 * std::log10(num / den), -kMetricCapDb, kMetricCapDb);
}

BssComponents bss_components(const AudioSignal& estimate, const AudioSignal& ref_speech,
                             const AudioSignal& ref_noise) {
  const auto& e = estimate.samples;
  const auto& s = ref_speech.samples;
  const auto& n = ref_noise.samples;
  if (e.size() != s.size() || e.size() != n.size()) {
    throw std::invalid_argument("estimate and references differ in length");
  }
  const double ss = energy(s), nn = energy(n);
  if (!(ss > 0.0) || !(nn > 0.0)) throw DataError("zero-energy reference");

  const double es = dot(e, s), en = dot(e, n), sn = dot(s, n);
  // Least-squares coefficients of e on span{s, n}; fall back to s alone
  // when the references are collinear.
  double cs = es / ss, cn = 0.0;
  const double det = ss * nn - sn * sn;
  if (det > 1e-12 * ss * nn) {
    cs = (es * nn - en * sn) / det;
    cn = (en * ss - es * sn) / det;
  }
  const double target_coef = es / ss;

  BssComponents c;
  const std::size_t len = e.size();
  c.target.resize(len);
  c.interference.resize(len);
  c.artifacts.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double projection = cs * s[i] + cn * n[i];
    c.target[i] = target_coef * s[i];
    c.interference[i] = projection - c.target[i];
    c.artifacts[i] = e[i] - projection;
  }
  return c;
}

BssScores bss_decompose(const AudioSignal& estimate, const AudioSignal& ref_speech,
                        const AudioSignal& ref_noise) {
  const BssComponents c = bss_components(estimate, ref_speech, ref_noise);
  double target = 0.0, interf = 0.0, artif = 0.0, distortion = 0.0, signal = 0.0;
  for (std::size_t i = 0; i < c.target.size(); ++i) {
    target += c.target[i] * c.target[i];
    interf += c.interference[i] * c.interference[i];
    artif += c.artifacts[i] * c.artifacts[i];
    const double d = c.interference[i] + c.artifacts[i];
    distortion += d * d;
    const double ti = c.target[i] + c.interference[i];
    signal += ti * ti;
  }
  return {capped_ratio_db(target, distortion), capped_ratio_db(target, interf),
          capped_ratio_db(signal, artif)};
}

double si_sdr(const AudioSignal& estimate, const AudioSignal& reference) {
  const auto& e = estimate.samples;
  const auto& r = reference.samples;
  if (e.size() != r.size()) throw std::invalid_argument("estimate and reference differ in length");
  const double rr = energy(r);
  if (!(rr > 0.0)) throw DataError("zero-energy reference");
  const double alpha = dot(e, r) / rr;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double t = alpha * r[i];
    target += t * t;
    residual += (e[i] - t) * (e[i] - t);
  }
  return capped_ratio_db(target, residual);
}

}  // namespace pamd
