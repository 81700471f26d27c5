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

#include "pamd/adam.h"

#include <cmath>
#include <stdexcept>

#include "pamd/errors.h"

namespace pamd {

AdamState AdamState::zeros_like(const NetworkParams& params, double learning_rate) {
  AdamState state;
  state.learning_rate = learning_rate;
  for (const Layer& l : params.layers) {
    Layer zero{RealMatrix::Zero(l.weight.rows(), l.weight.cols()),
               Eigen::VectorXd::Zero(l.bias.size())};
    state.first_moment.push_back(zero);
    state.second_moment.push_back(std::move(zero));
  }
  return state;
}

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state) {
  const std::size_t n = params.layers.size();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw std::invalid_argument("adam_step: layer counts differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Layer& p = params.layers[i];
    if (grads[i].weight.rows() != p.weight.rows() || grads[i].weight.cols() != p.weight.cols() ||
        grads[i].bias.size() != p.bias.size() ||
        state.first_moment[i].weight.rows() != p.weight.rows() ||
        state.first_moment[i].weight.cols() != p.weight.cols()) {
      throw std::invalid_argument("adam_step: shape mismatch");
    }
    if (!grads[i].weight.allFinite() || !grads[i].bias.allFinite()) {
      throw DivergenceError("diverged");
    }
  }

  ++state.step_count;
  const double b1 = state.beta1, b2 = state.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  const double lr = state.learning_rate, eps = state.epsilon;

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < n; ++i) {
    update(params.layers[i].weight, grads[i].weight, state.first_moment[i].weight,
           state.second_moment[i].weight);
    update(params.layers[i].bias, grads[i].bias, state.first_moment[i].bias,
           state.second_moment[i].bias);
  }
}

}  // namespace pamd
