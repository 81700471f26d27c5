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

#include "pamd/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace pamd {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

PlanPair plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  PlanPair p{fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE),
             fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE)};
  fftw_free(r);
  fftw_free(c);
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 2) throw std::invalid_argument("FFT size must be at least 2");
  PlanPair p = plans_for(size);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
  real_buf_ = fftw_alloc_real(size);
  complex_buf_ = fftw_alloc_complex(size / 2 + 1);
}

RealFft::~RealFft() {
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  if (static_cast<int>(in.size()) != size_ ||
      static_cast<int>(out.size()) != num_bins()) {
    throw std::invalid_argument("RealFft::forward size mismatch");
  }
  std::copy(in.begin(), in.end(), real_buf_);
  auto* c = static_cast<fftw_complex*>(complex_buf_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real_buf_, c);
  for (int k = 0; k < num_bins(); ++k) out[k] = {c[k][0], c[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  if (static_cast<int>(in.size()) != num_bins() ||
      static_cast<int>(out.size()) != size_) {
    throw std::invalid_argument("RealFft::inverse size mismatch");
  }
  auto* c = static_cast<fftw_complex*>(complex_buf_);
  for (int k = 0; k < num_bins(); ++k) {
    c[k][0] = in[k].real();
    c[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), c, real_buf_);
  const double scale = 1.0 / size_;
  for (int n = 0; n < size_; ++n) out[n] = real_buf_[n] * scale;
}

}  // namespace pamd
