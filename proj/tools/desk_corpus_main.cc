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

// Writes the synthetic desk corpus (speech-like WAVs, per-split noise WAVs
// and manifest.tsv) used by the examples and the acceptance suite.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "pamd/desk_corpus.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic desk corpus", "pamd_desk_corpus"};
  std::string dir;
  pamd::DeskCorpusSpec spec;
  app.add_option("--out", dir, "Output directory")->required();
  app.add_option("--train", spec.train, "Training utterances");
  app.add_option("--val", spec.val, "Validation utterances");
  app.add_option("--test", spec.test, "Test utterances");
  app.add_option("--min-seconds", spec.min_seconds, "Shortest utterance");
  app.add_option("--max-seconds", spec.max_seconds, "Longest utterance");
  app.add_option("--seed", spec.seed, "Corpus seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto records = pamd::write_desk_corpus(dir, spec);
    std::cout << "wrote " << records.size() << " records to " << dir << "/manifest.tsv\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
