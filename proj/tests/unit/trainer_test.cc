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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "pamd/desk_corpus.h"
#include "pamd/errors.h"
#include "test_util.h"

namespace pamd {
namespace {

// Ten frames of a real 0 dB mixture: magnitudes in, IRM out.
ExampleSet ten_frames() {
  const AudioSignal clean = synth_speech(1.0, 3);
  const AudioSignal noise = synth_noise(NoiseType::kPink, 1.0, 4);
  const PreparedUtterance u = prepare_utterance(clean, noise, 0.0, 5);
  const ExampleSet all = build_examples(u.features, 1);
  ExampleSet out;
  out.inputs = all.inputs.middleCols(20, 10);
  out.targets = all.targets.middleCols(20, 10);
  out.weights = all.weights.middleCols(20, 10);
  return out;
}

TrainingConfig small_config(int epochs) {
  TrainingConfig c;
  c.topology = mask_topology({128}, 1);
  c.epochs = epochs;
  c.learning_rate = 1e-3;
  c.batch_size = 4;
  c.seed = 17;
  c.dropout = default_dropout(c.topology, 1, 17);
  return c;
}

TEST(MaskTopology, InputWidthFollowsContext) {
  EXPECT_EQ(mask_topology({128}, 1), (std::vector<int>{513, 128, 513}));
  EXPECT_EQ(mask_topology({64, 32}, 3), (std::vector<int>{1539, 64, 32, 513}));
}

TEST(TrainingConfig, Validation) {
  TrainingConfig c = small_config(1);
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config(1);
  c.dropout.keep_prob.pop_back();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config(1);
  c.context_frames = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Train, ZeroEpochsReturnsInitialParams) {
  const ExampleSet data = ten_frames();
  const TrainResult r = train(small_config(0), data, ExampleSet{});
  const NetworkParams init = init_params(small_config(0).topology, 17);
  ASSERT_EQ(r.best.layers.size(), init.layers.size());
  for (std::size_t i = 0; i < init.layers.size(); ++i) {
    EXPECT_EQ(r.best.layers[i].weight, init.layers[i].weight);
    EXPECT_EQ(r.best.layers[i].bias, init.layers[i].bias);
  }
  ASSERT_EQ(r.log.size(), 1u);
  EXPECT_EQ(r.log[0].epoch, 0);
  EXPECT_TRUE(std::isnan(r.log[0].val_loss));
}

TEST(Train, MemorizesTenFrames) {
  const ExampleSet data = ten_frames();
  const TrainResult r = train(small_config(500), data, ExampleSet{});
  ASSERT_EQ(r.log.size(), 501u);
  EXPECT_LT(r.log.back().train_loss, 0.1 * r.log.front().train_loss);
  EXPECT_LT(dataset_loss(r.best, data, false), 0.1 * r.log.front().train_loss);
}

TEST(Train, PerceptualLossAlsoDecreases) {
  const ExampleSet data = ten_frames();
  TrainingConfig c = small_config(100);
  c.use_perceptual_weights = true;
  const TrainResult r = train(c, data, ExampleSet{});
  EXPECT_LT(r.log.back().train_loss, r.log.front().train_loss);
}

TEST(Train, IdenticalSeedsGiveIdenticalLogs) {
  const ExampleSet data = ten_frames();
  const TrainResult a = train(small_config(20), data, data);
  const TrainResult b = train(small_config(20), data, data);
  EXPECT_EQ(format_loss_log(a.log), format_loss_log(b.log));
  for (std::size_t i = 0; i < a.best.layers.size(); ++i) {
    EXPECT_EQ(a.best.layers[i].weight, b.best.layers[i].weight);
  }
  TrainingConfig other = small_config(20);
  other.seed = 18;
  EXPECT_NE(format_loss_log(train(other, data, data).log), format_loss_log(a.log));
}

TEST(Train, BestCheckpointFollowsValidationLoss) {
  const ExampleSet data = ten_frames();
  const TrainResult r = train(small_config(30), data, data);
  double best = r.log[0].val_loss;
  int best_epoch = 0;
  for (const LossRecord& rec : r.log) {
    if (rec.val_loss < best) {
      best = rec.val_loss;
      best_epoch = rec.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_DOUBLE_EQ(dataset_loss(r.best, data, false), best);
}

TEST(Train, CallbackSeesEveryEpoch) {
  const ExampleSet data = ten_frames();
  std::vector<int> seen;
  train(small_config(3), data, ExampleSet{}, [&](const LossRecord& r) { seen.push_back(r.epoch); });
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Train, RejectsMismatchedExamples) {
  ExampleSet data = ten_frames();
  data.targets = data.targets.topRows(100);
  EXPECT_THROW(train(small_config(1), data, ExampleSet{}), std::invalid_argument);
  EXPECT_THROW(train(small_config(1), ExampleSet{}, ExampleSet{}), DataError);
}

TEST(Train, NonFiniteInputsDiverge) {
  ExampleSet data = ten_frames();
  data.inputs(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(train(small_config(2), data, ExampleSet{}), DivergenceError);
}

TEST(LossLog, CsvFormat) {
  const std::vector<LossRecord> log = {{0, 0.5, 0.25}, {1, 0.125, std::nan("")}};
  EXPECT_EQ(format_loss_log(log), "epoch,train_loss,val_loss\n0,0.5,0.25\n1,0.125,nan\n");
}

}  // namespace
}  // namespace pamd
