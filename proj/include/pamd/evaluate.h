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

#ifndef PAMD_EVALUATE_H_
#define PAMD_EVALUATE_H_

#include <functional>
#include <string>
#include <vector>

#include "pamd/checkpoint.h"
#include "pamd/data_pipeline.h"

namespace pamd {

struct EvalRow {
  std::string utterance_id;
  std::size_t length_samples = 0;
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double sar_db = 0.0;
  double si_sdr_db = 0.0;
  double stoi = 0.0;
  // Baselines of the unprocessed mixture against the same references.
  double mixture_si_sdr_db = 0.0;
  double mixture_stoi = 0.0;
  bool failed = false;
  std::string error;
};

struct EvalAggregate {
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double sar_db = 0.0;
  double si_sdr_db = 0.0;
  double stoi = 0.0;
  double mixture_si_sdr_db = 0.0;
  double mixture_stoi = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  EvalAggregate aggregate;

  bool any_failed() const;
};

// Length-weighted means over rows that did not fail.
EvalAggregate aggregate_rows(const std::vector<EvalRow>& rows);

// Produces an F x T mask in [0, 1] for one prepared utterance.
using MaskEstimator = std::function<RealMatrix(const PreparedUtterance&)>;

MaskEstimator network_estimator(const Checkpoint& checkpoint);
MaskEstimator oracle_estimator();
MaskEstimator identity_estimator();

// Masks the mixture STFT and resynthesizes a signal of the mixture's length
// by weighted overlap-add. Where the analysis windows cover a sample less
// than in the interior (the edges and the dropped tail), the missing window
// energy is filled with the unmasked mixture, so a unit mask returns the
// mixture and edge samples are never amplified.
AudioSignal enhance(const AudioSignal& mixture, const Spectrogram& mixture_spec,
                    const RealMatrix& mask);

// Metrics of `estimate` against the references of `prepared`.
EvalRow score_utterance(const std::string& id, const PreparedUtterance& prepared,
                        const AudioSignal& estimate);

// Mixes each record at snr_db, denoises with the estimator and scores it.
// Failures become flagged rows; rows follow record order for any `jobs`.
EvalReport evaluate_corpus(const std::vector<UtteranceRecord>& records,
                           const MaskEstimator& estimator, std::uint64_t run_seed,
                           double snr_db = 0.0, int jobs = 1);

// Header utterance_id,length_samples,sdr_db,sir_db,sar_db,si_sdr_db,stoi,
// one line per row (failed rows carry nan), then an AGGREGATE line. Numbers
// use 6 significant digits.
std::string format_report_csv(const EvalReport& report);

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pamd

#endif  // PAMD_EVALUATE_H_
