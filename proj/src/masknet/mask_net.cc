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

#include "pamd/mask_net.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pamd {

namespace {

RealMatrix clip(const RealMatrix& raw) {
  return raw.unaryExpr([](double v) { return std::tanh(v); });
}

Eigen::VectorXd clip(const Eigen::VectorXd& raw) {
  return raw.unaryExpr([](double v) { return std::tanh(v); });
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void NetworkParams::validate() const {
  if (topology.size() < 2) throw std::invalid_argument("topology needs at least two widths");
  if (layers.size() + 1 != topology.size()) {
    throw std::invalid_argument("layer count does not match topology");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (topology[i] < 1 || topology[i + 1] < 1 || l.weight.cols() != topology[i] ||
        l.weight.rows() != topology[i + 1] || l.bias.size() != topology[i + 1]) {
      throw std::invalid_argument("layer " + std::to_string(i) + " shape does not match topology");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw std::invalid_argument("layer " + std::to_string(i) + " has non-finite parameters");
    }
  }
}

void DropoutPlan::validate(const std::vector<int>& topology) const {
  if (keep_prob.size() + 1 != topology.size()) {
    throw std::invalid_argument("dropout plan needs one keep probability per layer");
  }
  for (double p : keep_prob) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("keep probability must be in (0, 1]");
  }
}

double hidden_keep_prob(int width) {
  if (width >= 2048) return 0.6;
  if (width >= 1024) return 0.7;
  if (width >= 512) return 0.8;
  return 0.9;
}

DropoutPlan default_dropout(const std::vector<int>& topology, int context_frames,
                            std::uint64_t seed) {
  DropoutPlan plan;
  plan.rng_seed = seed;
  if (topology.size() < 2) return plan;
  plan.keep_prob.push_back(context_frames > 1 ? 0.5 : 0.95);
  for (std::size_t i = 1; i + 1 < topology.size(); ++i) {
    plan.keep_prob.push_back(hidden_keep_prob(topology[i]));
  }
  return plan;
}

DropoutMasks sample_dropout_masks(const NetworkParams& params,
                                  const DropoutPlan& plan, Eigen::Index batch,
                                  std::mt19937_64& rng) {
  plan.validate(params.topology);
  DropoutMasks masks;
  masks.reserve(params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const double keep = plan.keep_prob[i];
    RealMatrix m(params.topology[i], batch);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        m(r, c) = uniform01(rng) < keep ? 1.0 / keep : 0.0;
      }
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

ForwardCache forward(const NetworkParams& params, const RealMatrix& input,
                     const DropoutMasks& masks) {
  if (input.rows() != params.input_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(input.rows()) +
                                " does not match network input " +
                                std::to_string(params.input_dim()));
  }
  if (!masks.empty() && masks.size() != params.layers.size()) {
    throw std::invalid_argument("one dropout mask per layer is required");
  }
  const std::size_t num_layers = params.layers.size();
  ForwardCache cache;
  cache.topology = params.topology;
  cache.masks = masks;
  cache.layer_inputs.reserve(num_layers);
  cache.pre_activations.reserve(num_layers);

  RealMatrix x = input;
  for (std::size_t i = 0; i < num_layers; ++i) {
    const Layer& layer = params.layers[i];
    RealMatrix z;
    if (masks.empty()) {
      z.noalias() = clip(layer.weight) * x;
    } else {
      if (masks[i].rows() != x.rows() || masks[i].cols() != x.cols()) {
        throw std::invalid_argument("dropout mask shape mismatch at layer " + std::to_string(i));
      }
      z.noalias() = clip(layer.weight) * x.cwiseProduct(masks[i]);
    }
    z.colwise() += clip(layer.bias);
    cache.layer_inputs.push_back(std::move(x));
    if (i + 1 < num_layers) {
      x = z.cwiseMax(0.0);
    } else {
      x = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    }
    cache.pre_activations.push_back(std::move(z));
  }
  cache.output = std::move(x);
  return cache;
}

ForwardCache forward(const NetworkParams& params, const RealMatrix& input,
                     const DropoutPlan& plan, Mode mode, std::mt19937_64& rng) {
  if (mode == Mode::kInfer) return forward(params, input, DropoutMasks{});
  return forward(params, input, sample_dropout_masks(params, plan, input.cols(), rng));
}

RealMatrix infer(const NetworkParams& params, const RealMatrix& input) {
  return forward(params, input, DropoutMasks{}).output;
}

double loss(const RealMatrix& output, const RealMatrix& target,
            const RealMatrix* weights) {
  if (output.rows() != target.rows() || output.cols() != target.cols()) {
    throw std::invalid_argument("loss: output and target shapes differ");
  }
  if (weights && (weights->rows() != output.rows() || weights->cols() != output.cols())) {
    throw std::invalid_argument("loss: weight shape differs from output");
  }
  if (output.size() == 0) return 0.0;
  const double scale = 1.0 / static_cast<double>(output.size());
  if (weights) {
    return (weights->array() * (output - target).array().square()).sum() * scale;
  }
  return (output - target).array().square().sum() * scale;
}

Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   const RealMatrix& target, const RealMatrix* weights) {
  const std::size_t num_layers = params.layers.size();
  if (cache.topology != params.topology || cache.layer_inputs.size() != num_layers ||
      cache.pre_activations.size() != num_layers) {
    throw std::invalid_argument("backward: cache does not belong to this network");
  }
  const RealMatrix& y = cache.output;
  if (target.rows() != y.rows() || target.cols() != y.cols()) {
    throw std::invalid_argument("backward: target shape does not match cached output");
  }
  if (weights && (weights->rows() != y.rows() || weights->cols() != y.cols())) {
    throw std::invalid_argument("backward: weight shape does not match cached output");
  }

  const double scale = 2.0 / static_cast<double>(y.size());
  RealMatrix delta = (y - target) * scale;
  if (weights) delta = delta.cwiseProduct(*weights);
  delta.array() *= y.array() * (1.0 - y.array());

  Gradients grads(num_layers);
  for (std::size_t step = 0; step < num_layers; ++step) {
    const std::size_t i = num_layers - 1 - step;
    const Layer& layer = params.layers[i];
    const RealMatrix w_eff = clip(layer.weight);
    const Eigen::VectorXd b_eff = clip(layer.bias);
    const bool dropped = !cache.masks.empty();
    RealMatrix x = dropped ? RealMatrix(cache.layer_inputs[i].cwiseProduct(cache.masks[i]))
                           : cache.layer_inputs[i];

    RealMatrix gw;
    gw.noalias() = delta * x.transpose();
    grads[i].weight = gw.cwiseProduct((1.0 - w_eff.array().square()).matrix());
    grads[i].bias = delta.rowwise().sum().cwiseProduct(
        (1.0 - b_eff.array().square()).matrix());

    if (i == 0) break;
    RealMatrix dx;
    dx.noalias() = w_eff.transpose() * delta;
    if (dropped) dx = dx.cwiseProduct(cache.masks[i]);
    const RealMatrix& z_prev = cache.pre_activations[i - 1];
    delta = dx.cwiseProduct(z_prev.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
  }
  return grads;
}

NetworkParams init_params(const std::vector<int>& topology, std::uint64_t seed) {
  NetworkParams params;
  params.topology = topology;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  auto draw = [&] {
    for (;;) {
      double v = normal(rng);
      if (std::abs(v) <= 0.2) return v;
    }
  };
  for (std::size_t i = 0; i + 1 < topology.size(); ++i) {
    if (topology[i] < 1 || topology[i + 1] < 1) {
      throw std::invalid_argument("layer widths must be positive");
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(topology[i]));
    Layer layer;
    layer.weight.resize(topology[i + 1], topology[i]);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = draw() * norm;
    }
    layer.bias = Eigen::VectorXd::Zero(topology[i + 1]);
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

ComplexMatrix apply_mask(const RealMatrix& mask, const ComplexMatrix& mixture) {
  if (mask.rows() != mixture.rows() || mask.cols() != mixture.cols()) {
    throw std::invalid_argument("mask and mixture shapes differ");
  }
  return mixture.cwiseProduct(mask.cast<std::complex<double>>());
}

}  // namespace pamd
