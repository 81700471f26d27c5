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

#include "pamd/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "pamd/adam.h"
#include "pamd/errors.h"

namespace pamd {

namespace {

constexpr Eigen::Index kEvalChunk = 2048;
constexpr std::uint64_t kDropoutStream = 0x9e3779b97f4a7c15ull;

RealMatrix gather(const RealMatrix& m, const std::vector<std::size_t>& columns) {
  RealMatrix out(m.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(columns[j]));
  }
  return out;
}

void check_examples(const ExampleSet& data, const TrainingConfig& config,
                    const char* name) {
  if (data.size() == 0) return;
  if (data.inputs.rows() != config.topology.front() ||
      data.targets.rows() != config.topology.back() ||
      data.targets.cols() != data.size()) {
    throw std::invalid_argument(std::string(name) +
                                " examples do not match the network topology");
  }
  if (config.use_perceptual_weights &&
      (data.weights.rows() != data.targets.rows() || data.weights.cols() != data.size())) {
    throw std::invalid_argument(std::string(name) + " examples carry no perceptual weights");
  }
}

}  // namespace

void TrainingConfig::validate() const {
  if (topology.size() < 2) throw std::invalid_argument("topology needs at least two widths");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (context_frames != 1 && context_frames != 3) {
    throw std::invalid_argument("context_frames must be 1 or 3");
  }
  dropout.validate(topology);
}

std::vector<int> mask_topology(const std::vector<int>& hidden, int context_frames) {
  std::vector<int> topology{kNumBins * context_frames};
  topology.insert(topology.end(), hidden.begin(), hidden.end());
  topology.push_back(kNumBins);
  return topology;
}

double dataset_loss(const NetworkParams& params, const ExampleSet& data,
                    bool use_weights) {
  if (data.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (Eigen::Index start = 0; start < data.size(); start += kEvalChunk) {
    const Eigen::Index n = std::min(kEvalChunk, data.size() - start);
    RealMatrix out = infer(params, data.inputs.middleCols(start, n));
    RealMatrix target = data.targets.middleCols(start, n);
    if (use_weights) {
      RealMatrix w = data.weights.middleCols(start, n);
      total += loss(out, target, &w) * static_cast<double>(out.size());
    } else {
      total += loss(out, target, nullptr) * static_cast<double>(out.size());
    }
  }
  return total / static_cast<double>(data.size() * data.targets.rows());
}

TrainResult train(const TrainingConfig& config, const ExampleSet& training,
                  const ExampleSet& validation,
                  const std::function<void(const LossRecord&)>& on_epoch) {
  config.validate();
  check_examples(training, config, "training");
  check_examples(validation, config, "validation");
  if (training.size() == 0 && config.epochs > 0) {
    throw DataError("no training examples");
  }
  const bool weighted = config.use_perceptual_weights;

  TrainResult result;
  NetworkParams params = init_params(config.topology, config.seed);
  auto record = [&](int epoch) {
    LossRecord r{epoch, dataset_loss(params, training, weighted),
                 dataset_loss(params, validation, weighted)};
    if (!std::isfinite(r.train_loss) && training.size() > 0) {
      throw DivergenceError("diverged: non-finite training loss at epoch " +
                            std::to_string(epoch));
    }
    result.log.push_back(r);
    if (on_epoch) on_epoch(r);
    return validation.size() > 0 ? r.val_loss : r.train_loss;
  };

  double best = record(0);
  result.best = params;
  result.best_epoch = 0;

  AdamState state = AdamState::zeros_like(params, config.learning_rate);
  std::mt19937_64 dropout_rng(config.dropout.rng_seed ^ kDropoutStream);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (const auto& batch :
         batch_iterator(static_cast<std::size_t>(training.size()),
                        static_cast<std::size_t>(config.batch_size), config.seed,
                        static_cast<std::uint64_t>(epoch))) {
      const RealMatrix x = gather(training.inputs, batch);
      const RealMatrix m = gather(training.targets, batch);
      ForwardCache cache = forward(params, x, config.dropout, Mode::kTrain, dropout_rng);
      Gradients grads;
      if (weighted) {
        const RealMatrix h = gather(training.weights, batch);
        if (!std::isfinite(loss(cache.output, m, &h))) {
          throw DivergenceError("diverged: non-finite batch loss at epoch " +
                                std::to_string(epoch));
        }
        grads = backward(params, cache, m, &h);
      } else {
        grads = backward(params, cache, m, nullptr);
      }
      adam_step(params, grads, state);
    }
    const double score = record(epoch);
    if (score < best) {
      best = score;
      result.best = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

std::string format_loss_log(const std::vector<LossRecord>& log) {
  std::string out = "epoch,train_loss,val_loss\n";
  char line[128];
  for (const LossRecord& r : log) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", r.epoch, r.train_loss, r.val_loss);
    out += line;
  }
  return out;
}

}  // namespace pamd
