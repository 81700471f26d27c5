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

#ifndef PAMD_FFT_H_
#define PAMD_FFT_H_

#include <complex>
#include <span>

namespace pamd {

// Real-input FFT of a fixed size backed by FFTW. Plans are shared between
// instances; each instance owns its scratch buffers, so one instance must
// not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  // in.size() == size(), out.size() == num_bins(). Unnormalized.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out);
  // Inverse including the 1/size factor, so inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out);

 private:
  int size_;
  double* real_buf_;
  void* complex_buf_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace pamd

#endif  // PAMD_FFT_H_
