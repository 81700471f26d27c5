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

#ifndef PAMD_ADAM_H_
#define PAMD_ADAM_H_

#include <cstdint>

#include "pamd/mask_net.h"

namespace pamd {

struct AdamState {
  Gradients first_moment;
  Gradients second_moment;
  std::int64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;

  static AdamState zeros_like(const NetworkParams& params, double learning_rate);
};

// Bias-corrected Adam update of the raw parameters. Throws DivergenceError
// ("diverged") on a non-finite gradient, leaving params and state untouched.
void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state);

}  // namespace pamd

#endif  // PAMD_ADAM_H_
