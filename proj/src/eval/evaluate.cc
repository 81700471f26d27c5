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

#include "pamd/evaluate.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pamd/mask_net.h"
#include "pamd/metrics.h"
#include "pamd/stoi.h"

namespace pamd {

bool EvalReport::any_failed() const {
  for (const EvalRow& r : rows) {
    if (r.failed) return true;
  }
  return false;
}

EvalAggregate aggregate_rows(const std::vector<EvalRow>& rows) {
  EvalAggregate a;
  double total = 0.0;
  for (const EvalRow& r : rows) {
    if (r.failed) continue;
    const double w = static_cast<double>(r.length_samples);
    total += w;
    a.sdr_db += w * r.sdr_db;
    a.sir_db += w * r.sir_db;
    a.sar_db += w * r.sar_db;
    a.si_sdr_db += w * r.si_sdr_db;
    a.stoi += w * r.stoi;
    a.mixture_si_sdr_db += w * r.mixture_si_sdr_db;
    a.mixture_stoi += w * r.mixture_stoi;
  }
  if (total <= 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan, nan, nan};
  }
  for (double* v : {&a.sdr_db, &a.sir_db, &a.sar_db, &a.si_sdr_db, &a.stoi,
                    &a.mixture_si_sdr_db, &a.mixture_stoi}) {
    *v /= total;
  }
  return a;
}

MaskEstimator network_estimator(const Checkpoint& checkpoint) {
  return [checkpoint](const PreparedUtterance& u) {
    return infer(checkpoint.params,
                 context_inputs(u.features.mixture_magnitude, checkpoint.config.context_frames));
  };
}

MaskEstimator oracle_estimator() {
  return [](const PreparedUtterance& u) { return u.features.irm; };
}

MaskEstimator identity_estimator() {
  return [](const PreparedUtterance& u) {
    return RealMatrix::Ones(u.features.mixture_magnitude.rows(),
                            u.features.mixture_magnitude.cols())
        .eval();
  };
}

AudioSignal enhance(const AudioSignal& mixture, const Spectrogram& mixture_spec,
                    const RealMatrix& mask) {
  Spectrogram enhanced = mixture_spec;
  enhanced.data = apply_mask(mask, mixture_spec.data);
  const AudioSignal synthesized = istft(enhanced);
  const std::vector<double> coverage = overlap_window_energy(
      enhanced.num_frames(), enhanced.fft_size, enhanced.hop);
  const double full = *std::max_element(coverage.begin(), coverage.end());
  AudioSignal out = mixture;
  for (std::size_t i = 0; i < synthesized.size() && i < out.size(); ++i) {
    const double c = coverage[i];
    if (c <= 1e-10) continue;
    out.samples[i] = (synthesized.samples[i] * c + (full - c) * mixture.samples[i]) / full;
  }
  return out;
}

EvalRow score_utterance(const std::string& id, const PreparedUtterance& prepared,
                        const AudioSignal& estimate) {
  EvalRow row;
  row.utterance_id = id;
  row.length_samples = prepared.clean.size();
  const BssScores bss = bss_decompose(estimate, prepared.clean, prepared.mix.scaled_noise);
  row.sdr_db = bss.sdr_db;
  row.sir_db = bss.sir_db;
  row.sar_db = bss.sar_db;
  row.si_sdr_db = si_sdr(estimate, prepared.clean);
  row.stoi = stoi(prepared.clean, estimate);
  row.mixture_si_sdr_db = si_sdr(prepared.mix.mixture, prepared.clean);
  row.mixture_stoi = stoi(prepared.clean, prepared.mix.mixture);
  return row;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (std::size_t w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

EvalReport evaluate_corpus(const std::vector<UtteranceRecord>& records,
                           const MaskEstimator& estimator, std::uint64_t run_seed,
                           double snr_db, int jobs) {
  EvalReport report;
  report.rows.resize(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    const UtteranceRecord& rec = records[i];
    EvalRow& row = report.rows[i];
    try {
      const AudioSignal clean = read_wav(rec.clean_path);
      const AudioSignal noise = read_wav(rec.noise_path);
      const PreparedUtterance prepared =
          prepare_utterance(clean, noise, snr_db, mixing_seed(rec, run_seed), false);
      const RealMatrix mask = estimator(prepared);
      if (mask.rows() != prepared.mixture_spec.num_bins() ||
          mask.cols() != prepared.mixture_spec.num_frames()) {
        throw std::invalid_argument("estimated mask has the wrong shape");
      }
      if (!mask.allFinite() || mask.minCoeff() < 0.0 || mask.maxCoeff() > 1.0) {
        throw std::invalid_argument("estimated mask outside [0, 1]");
      }
      const AudioSignal estimate = enhance(prepared.mix.mixture, prepared.mixture_spec, mask);
      row = score_utterance(rec.id, prepared, estimate);
    } catch (const std::exception& e) {
      row = EvalRow{};
      row.utterance_id = rec.id;
      row.failed = true;
      row.error = e.what();
    }
  });
  report.aggregate = aggregate_rows(report.rows);
  return report;
}

std::string format_report_csv(const EvalReport& report) {
  std::string out = "utterance_id,length_samples,sdr_db,sir_db,sar_db,si_sdr_db,stoi\n";
  char line[512];
  std::size_t total = 0;
  for (const EvalRow& r : report.rows) {
    if (r.failed) {
      std::snprintf(line, sizeof(line), "%s,%zu,nan,nan,nan,nan,nan\n", r.utterance_id.c_str(),
                    r.length_samples);
    } else {
      total += r.length_samples;
      std::snprintf(line, sizeof(line), "%s,%zu,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                    r.utterance_id.c_str(), r.length_samples, r.sdr_db, r.sir_db, r.sar_db,
                    r.si_sdr_db, r.stoi);
    }
    out += line;
  }
  const EvalAggregate& a = report.aggregate;
  std::snprintf(line, sizeof(line), "AGGREGATE,%zu,%.6g,%.6g,%.6g,%.6g,%.6g\n", total, a.sdr_db,
                a.sir_db, a.sar_db, a.si_sdr_db, a.stoi);
  out += line;
  return out;
}

}  // namespace pamd
