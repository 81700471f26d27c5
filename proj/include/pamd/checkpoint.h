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

#ifndef PAMD_CHECKPOINT_H_
#define PAMD_CHECKPOINT_H_

#include <string>

#include "pamd/trainer.h"

namespace pamd {

struct Checkpoint {
  NetworkParams params;
  TrainingConfig config;
};

// Layout: "PAMDCKPT", u32 version, u64 header length, JSON header (topology,
// training config, seed), then every layer's raw weights (row-major) and
// bias as little-endian float64.
std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws DataError on a malformed file or when the stored parameters do not
// match the stored topology.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pamd

#endif  // PAMD_CHECKPOINT_H_
