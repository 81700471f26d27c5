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

#ifndef PAMD_TRAINER_H_
#define PAMD_TRAINER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "pamd/data_pipeline.h"
#include "pamd/mask_net.h"

namespace pamd {

struct TrainingConfig {
  std::vector<int> topology;
  double learning_rate = 1e-3;
  int epochs = 1;
  int batch_size = 256;
  bool use_perceptual_weights = false;
  DropoutPlan dropout;
  std::uint64_t seed = 0;
  int context_frames = 1;

  void validate() const;
};

// Topology for `hidden` layer widths on 513-bin spectra.
std::vector<int> mask_topology(const std::vector<int>& hidden, int context_frames);

struct LossRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;  // NaN without a validation set
};

struct TrainResult {
  NetworkParams best;
  int best_epoch = 0;
  std::vector<LossRecord> log;
};

// Loss of the whole set in inference mode, evaluated in fixed-size chunks.
double dataset_loss(const NetworkParams& params, const ExampleSet& data,
                    bool use_weights);

// Mini-batch Adam training. Row 0 of the log holds the losses of the
// initial parameters. The returned parameters are those with the lowest
// validation loss (training loss when `validation` is empty). Throws
// DivergenceError when a loss or gradient becomes non-finite.
TrainResult train(const TrainingConfig& config, const ExampleSet& training,
                  const ExampleSet& validation,
                  const std::function<void(const LossRecord&)>& on_epoch = {});

// CSV with header epoch,train_loss,val_loss.
std::string format_loss_log(const std::vector<LossRecord>& log);

}  // namespace pamd

#endif  // PAMD_TRAINER_H_
