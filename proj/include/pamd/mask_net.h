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

#ifndef PAMD_MASK_NET_H_
#define PAMD_MASK_NET_H_

#include <cstdint>
#include <random>
#include <vector>

#include "pamd/stft.h"

namespace pamd {

// One affine layer. Raw parameters are stored; the network uses tanh(raw).
struct Layer {
  RealMatrix weight;      // out x in
  Eigen::VectorXd bias;   // out
};

struct NetworkParams {
  std::vector<int> topology;  // layer widths, input first, output last
  std::vector<Layer> layers;

  int input_dim() const { return topology.front(); }
  int output_dim() const { return topology.back(); }
  // Throws std::invalid_argument on inconsistent shapes or non-finite
  // entries.
  void validate() const;
};

// Same shapes as NetworkParams::layers.
using Gradients = std::vector<Layer>;

// Keep probability of the dropout mask applied to each layer's input.
struct DropoutPlan {
  std::vector<double> keep_prob;
  std::uint64_t rng_seed = 0;

  void validate(const std::vector<int>& topology) const;
};

// Keep rate for the input of a layer fed by a hidden layer of this width:
// 0.6 for 2048 units, 0.7 for 1024, 0.8 for 512 and 0.9 for narrower ones.
double hidden_keep_prob(int width);
// Input layer: 0.95 for single frames, 0.5 for concatenated context.
DropoutPlan default_dropout(const std::vector<int>& topology, int context_frames,
                            std::uint64_t seed);

// Values 0 or 1/keep per element, one matrix per layer input (in x batch).
using DropoutMasks = std::vector<RealMatrix>;

enum class Mode { kTrain, kInfer };

struct ForwardCache {
  std::vector<int> topology;
  std::vector<RealMatrix> layer_inputs;      // X^(i) before dropout
  DropoutMasks masks;                        // empty in infer mode
  std::vector<RealMatrix> pre_activations;   // before ReLU / logistic
  RealMatrix output;                         // F x batch, in (0, 1)
};

DropoutMasks sample_dropout_masks(const NetworkParams& params,
                                  const DropoutPlan& plan, Eigen::Index batch,
                                  std::mt19937_64& rng);

// Hidden layers compute ReLU(tanh(W) (R . x) + tanh(b)), the last layer uses
// the logistic function. Inputs and outputs are column batches.
ForwardCache forward(const NetworkParams& params, const RealMatrix& input,
                     const DropoutMasks& masks);
ForwardCache forward(const NetworkParams& params, const RealMatrix& input,
                     const DropoutPlan& plan, Mode mode, std::mt19937_64& rng);
RealMatrix infer(const NetworkParams& params, const RealMatrix& input);

// (1 / (F B)) sum H (out - M)^2. Pass nullptr for the unweighted loss.
double loss(const RealMatrix& output, const RealMatrix& target,
            const RealMatrix* weights);

// Gradient of loss() with respect to the raw parameters, through the tanh
// clipping and the dropout masks recorded in the cache.
Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   const RealMatrix& target, const RealMatrix* weights);

// Raw weights drawn from N(0, 0.1) truncated at two standard deviations and
// divided by sqrt(fan_in); zero biases.
NetworkParams init_params(const std::vector<int>& topology, std::uint64_t seed);

// Magnitude scaled by the mask, phase kept from the mixture.
ComplexMatrix apply_mask(const RealMatrix& mask, const ComplexMatrix& mixture);

}  // namespace pamd

#endif  // PAMD_MASK_NET_H_
