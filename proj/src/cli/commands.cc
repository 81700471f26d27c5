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

#include "pamd/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "pamd/checkpoint.h"
#include "pamd/data_pipeline.h"
#include "pamd/errors.h"
#include "pamd/evaluate.h"
#include "pamd/psychoacoustics.h"
#include "pamd/trainer.h"

namespace pamd {

namespace {

namespace fs = std::filesystem;

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

void echo_config(std::ostream& err, const std::string& command, const ConfigEcho& echo) {
  err << "[" << command << "]\n";
  for (const auto& [key, value] : echo) err << key << "=" << value << "\n";
  err << "[/" << command << "]\n";
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("short write to " + path);
}

std::vector<int> parse_widths(const std::string& text) {
  std::vector<int> widths;
  if (text.empty() || text == "none") return widths;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int w = std::stoi(item, &used);
      if (used != item.size() || w < 1) throw std::invalid_argument(item);
      widths.push_back(w);
    } catch (const std::exception&) {
      throw UsageError("bad layer width '" + item + "'");
    }
  }
  return widths;
}

bool parse_on_off(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw UsageError("expected on|off, got '" + v + "'");
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareOptions {
  std::string manifest;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  double snr_db = 0.0;
};

int cmd_prepare(const PrepareOptions& o, std::ostream& out, std::ostream& err) {
  echo_config(err, "prepare", {{"manifest", o.manifest}, {"out", o.out_dir},
                               {"seed", std::to_string(o.seed)}, {"jobs", std::to_string(o.jobs)},
                               {"snr", fmt_double(o.snr_db)}});
  const std::vector<UtteranceRecord> records = read_manifest(o.manifest);
  if (records.empty()) throw DataError("no records");
  fs::create_directories(o.out_dir);

  struct Outcome {
    std::string cache_file;
    double snr = 0.0;
    long frames = 0;
    double gain = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), o.jobs, [&](std::size_t i) {
    const UtteranceRecord& rec = records[i];
    Outcome& oc = outcomes[i];
    try {
      const AudioSignal clean = read_wav(rec.clean_path);
      const AudioSignal noise = read_wav(rec.noise_path);
      const std::uint64_t seed = mixing_seed(rec, o.seed);
      const PreparedUtterance p = prepare_utterance(clean, noise, o.snr_db, seed);
      char name[32];
      std::snprintf(name, sizeof(name), "%016llx.feat",
                    static_cast<unsigned long long>(content_hash(clean, noise, seed, o.snr_db)));
      write_feature_cache((fs::path(o.out_dir) / name).string(), p.features);
      oc = {name, p.mix.achieved_snr_db, static_cast<long>(p.features.num_frames()),
            p.mix.noise_gain, ""};
    } catch (const std::exception& e) {
      oc.error = e.what();
    }
  });

  std::string index = "utterance_id\tsplit\tcache_file\tframes\n";
  std::string report = "utterance_id,split,snr_db,frames,noise_gain,status\n";
  int failures = 0;
  char line[512];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Outcome& oc = outcomes[i];
    if (!oc.error.empty()) {
      ++failures;
      err << "prepare: " << records[i].id << ": " << oc.error << "\n";
      std::snprintf(line, sizeof(line), "%s,%s,nan,0,nan,failed\n", records[i].id.c_str(),
                    split_name(records[i].split).c_str());
      report += line;
      continue;
    }
    index += records[i].id + "\t" + split_name(records[i].split) + "\t" + oc.cache_file + "\t" +
             std::to_string(oc.frames) + "\n";
    std::snprintf(line, sizeof(line), "%s,%s,%.9f,%ld,%.9g,ok\n", records[i].id.c_str(),
                  split_name(records[i].split).c_str(), oc.snr, oc.frames, oc.gain);
    report += line;
  }
  write_text((fs::path(o.out_dir) / "index.tsv").string(), index);
  write_text((fs::path(o.out_dir) / "prepare_report.csv").string(), report);
  out << "prepared " << records.size() - failures << " of " << records.size()
      << " utterances into " << o.out_dir << "\n";
  return failures ? kExitData : kExitOk;
}

struct CacheEntry {
  std::string id;
  Split split;
  std::string file;
};

std::vector<CacheEntry> read_cache_index(const std::string& dir) {
  const std::string path = (fs::path(dir) / "index.tsv").string();
  std::ifstream in(path);
  if (!in) throw DataError("no prepared cache index at " + path);
  std::vector<CacheEntry> entries;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, split, file, frames;
    if (!std::getline(ss, id, '\t') || !std::getline(ss, split, '\t') ||
        !std::getline(ss, file, '\t')) {
      throw DataError(path + ": malformed line");
    }
    entries.push_back({id, parse_split(split), (fs::path(dir) / file).string()});
  }
  return entries;
}

// ---------------------------------------------------------------------------
// thresholds

struct ThresholdOptions {
  std::string wav;
  long frame = 0;
  std::string out;
  std::string maskers_out;
};

int cmd_thresholds(const ThresholdOptions& o, std::ostream& out, std::ostream& err) {
  echo_config(err, "thresholds", {{"wav", o.wav}, {"frame", std::to_string(o.frame)},
                                  {"out", o.out.empty() ? "-" : o.out},
                                  {"maskers", o.maskers_out.empty() ? "-" : o.maskers_out}});
  const AudioSignal signal = read_wav(o.wav);
  const Spectrogram spec = stft(signal);
  if (o.frame < 0 || o.frame >= spec.num_frames()) {
    throw UsageError("frame index " + std::to_string(o.frame) + " out of range [0, " +
                     std::to_string(spec.num_frames()) + ")");
  }
  const BarkScale scale = BarkScale::for_stft(spec.fft_size, spec.sample_rate);
  const PsdMatrix psd = power_spectral_density(spec);
  const Eigen::VectorXd column = psd.values.col(o.frame);
  std::span<const double> frame(column.data(), static_cast<std::size_t>(column.size()));
  const std::vector<TonalMasker> maskers = find_tonal_maskers(frame, scale);
  const std::vector<double> g = threshold_from_maskers(maskers, scale);

  std::string csv = "bin_hz,psd_db,ath_db,global_threshold_db,weight\n";
  char line[256];
  for (int k = 0; k < scale.num_bins(); ++k) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", scale.bin_to_hz[k],
                  column[k], absolute_threshold_capped(scale.bin_to_hz[k]), g[k],
                  perceptual_weight(column[k], g[k]));
    csv += line;
  }
  std::string masker_csv = "bin,hz,bark,spl_db\n";
  err << "tonal maskers: " << maskers.size() << "\n";
  for (const TonalMasker& m : maskers) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", m.bin, scale.bin_to_hz[m.bin],
                  m.bark, m.spl);
    masker_csv += line;
    err << "  masker " << line;
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
  }
  if (!o.maskers_out.empty()) write_text(o.maskers_out, masker_csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string cache_dir;
  std::string out;
  std::string log;
  std::string hidden = "128";
  int context = 1;
  double lr = 1e-3;
  int epochs = 200;
  int batch_size = 256;
  std::string perceptual = "off";
  std::uint64_t seed = 0;
  double keep_input = -1.0;
};

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const std::string log_path = o.log.empty() ? o.out + ".loss.csv" : o.log;
  TrainingConfig config;
  config.topology = mask_topology(parse_widths(o.hidden), o.context);
  config.learning_rate = o.lr;
  config.epochs = o.epochs;
  config.batch_size = o.batch_size;
  config.use_perceptual_weights = parse_on_off(o.perceptual);
  config.seed = o.seed;
  config.context_frames = o.context;
  config.dropout = default_dropout(config.topology, o.context, o.seed);
  if (o.keep_input > 0.0) config.dropout.keep_prob.front() = o.keep_input;

  std::string keep;
  for (double k : config.dropout.keep_prob) keep += (keep.empty() ? "" : ",") + fmt_double(k);
  std::string topo;
  for (int w : config.topology) topo += (topo.empty() ? "" : ",") + std::to_string(w);
  echo_config(err, "train",
              {{"cache", o.cache_dir}, {"out", o.out}, {"log", log_path}, {"topology", topo},
               {"context", std::to_string(o.context)}, {"lr", fmt_double(o.lr)},
               {"epochs", std::to_string(o.epochs)}, {"batch-size", std::to_string(o.batch_size)},
               {"perceptual", config.use_perceptual_weights ? "on" : "off"},
               {"seed", std::to_string(o.seed)}, {"keep-prob", keep}});
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ExampleSet training, validation;
  for (const CacheEntry& entry : read_cache_index(o.cache_dir)) {
    if (entry.split == Split::kTest) continue;
    const UtteranceFeatures f = read_feature_cache(entry.file);
    if (f.mixture_magnitude.rows() != kNumBins) {
      throw DataError("topology/cache mismatch: cache has " +
                      std::to_string(f.mixture_magnitude.rows()) + " bins");
    }
    (entry.split == Split::kTrain ? training : validation)
        .append(build_examples(f, config.context_frames));
  }
  if (training.size() == 0 && config.epochs > 0) throw DataError("cache holds no training split");

  const TrainResult result = train(config, training, validation, [&](const LossRecord& r) {
    err << "epoch " << r.epoch << " train_loss " << fmt_double(r.train_loss) << " val_loss "
        << fmt_double(r.val_loss) << "\n";
  });
  save_checkpoint(o.out, {result.best, config});
  write_text(log_path, format_loss_log(result.log));
  out << "trained " << training.size() << " examples for " << config.epochs
      << " epochs; best epoch " << result.best_epoch << "; checkpoint " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseOptions {
  std::string checkpoint;
  std::string in;
  std::string out;
};

int cmd_denoise(const DenoiseOptions& o, std::ostream& out, std::ostream& err) {
  echo_config(err, "denoise", {{"checkpoint", o.checkpoint}, {"in", o.in}, {"out", o.out}});
  const Checkpoint ck = load_checkpoint(o.checkpoint);
  const AudioSignal input = read_wav(o.in);
  if (input.sample_rate != kSampleRate) {
    throw DataError("sample rate " + std::to_string(input.sample_rate) + " Hz, expected " +
                    std::to_string(kSampleRate));
  }
  AudioSignal output = input;
  if (input.size() >= static_cast<std::size_t>(kFftSize)) {
    const Spectrogram spec = stft(input);
    const RealMatrix mask =
        infer(ck.params, context_inputs(magnitude(spec), ck.config.context_frames));
    output = enhance(input, spec, mask);
  } else {
    err << "input shorter than one frame; passed through unchanged\n";
  }
  write_wav(o.out, output);
  out << "wrote " << output.size() << " samples to " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string checkpoint;
  std::string manifest;
  std::string split = "test";
  std::string out;
  std::string estimator = "network";
  std::uint64_t seed = 0;
  int jobs = 1;
  double snr_db = 0.0;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  echo_config(err, "evaluate",
              {{"checkpoint", o.checkpoint.empty() ? "-" : o.checkpoint},
               {"manifest", o.manifest}, {"split", o.split}, {"out", o.out},
               {"estimator", o.estimator}, {"seed", std::to_string(o.seed)},
               {"jobs", std::to_string(o.jobs)}, {"snr", fmt_double(o.snr_db)}});
  MaskEstimator estimator;
  if (o.estimator == "network") {
    if (o.checkpoint.empty()) throw UsageError("--checkpoint is required for the network estimator");
    estimator = network_estimator(load_checkpoint(o.checkpoint));
  } else if (o.estimator == "oracle") {
    estimator = oracle_estimator();
  } else if (o.estimator == "identity") {
    estimator = identity_estimator();
  } else {
    throw UsageError("unknown estimator '" + o.estimator + "'");
  }
  std::vector<UtteranceRecord> records = read_manifest(o.manifest);
  if (o.split != "all") records = filter_split(records, parse_split(o.split));
  if (records.empty()) throw DataError("no records");

  const EvalReport report = evaluate_corpus(records, estimator, o.seed, o.snr_db, o.jobs);
  write_text(o.out, format_report_csv(report));
  for (const EvalRow& r : report.rows) {
    if (r.failed) err << "evaluate: " << r.utterance_id << ": " << r.error << "\n";
  }
  const EvalAggregate& a = report.aggregate;
  out << "evaluated " << report.rows.size() << " utterances: SDR " << a.sdr_db << " dB, SIR "
      << a.sir_db << " dB, SAR " << a.sar_db << " dB, SI-SDR " << a.si_sdr_db
      << " dB (mixture " << a.mixture_si_sdr_db << " dB), STOI " << a.stoi << " (mixture "
      << a.mixture_stoi << ")\n";
  return report.any_failed() ? kExitData : kExitOk;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.size() < 2) return args;

  auto present = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> merged(args.begin(), args.begin() + 2);
  for (const auto& [key, value] : read_config_file(config_path)) {
    if (key == "config" || present(key)) continue;
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  merged.insert(merged.end(), args.begin() + 2, args.end());
  return merged;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perceptually weighted mask-estimation speech denoising", "pamd"};
  app.require_subcommand(1);
  std::string config_path;

  PrepareOptions prep;
  auto* prepare = app.add_subcommand("prepare", "Mix a manifest and cache |X|, IRM and weights");
  prepare->add_option("--manifest", prep.manifest, "Manifest file")->required();
  prepare->add_option("--out", prep.out_dir, "Output cache directory")->required();
  prepare->add_option("--seed", prep.seed, "Run seed");
  prepare->add_option("--jobs", prep.jobs, "Worker threads");
  prepare->add_option("--snr", prep.snr_db, "Mixture SNR in dB");
  prepare->add_option("--config", config_path, "key=value config file");

  ThresholdOptions thr;
  auto* thresholds = app.add_subcommand("thresholds", "Export one frame's masking curves as CSV");
  thresholds->add_option("--wav", thr.wav, "16-bit mono WAV")->required();
  thresholds->add_option("--frame", thr.frame, "Frame index")->required();
  thresholds->add_option("--out", thr.out, "CSV output (default stdout)");
  thresholds->add_option("--maskers", thr.maskers_out, "Tonal masker CSV output");
  thresholds->add_option("--config", config_path, "key=value config file");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train a mask network on a prepared cache");
  train_cmd->add_option("--cache", tr.cache_dir, "Prepared cache directory")->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", tr.log, "Loss log CSV (default <out>.loss.csv)");
  train_cmd->add_option("--hidden", tr.hidden, "Hidden widths, comma separated");
  train_cmd->add_option("--context", tr.context, "Input frames: 1 or 3");
  train_cmd->add_option("--lr", tr.lr, "Adam learning rate");
  train_cmd->add_option("--epochs", tr.epochs, "Epochs");
  train_cmd->add_option("--batch-size", tr.batch_size, "Mini-batch size");
  train_cmd->add_option("--perceptual", tr.perceptual, "Perceptual weighting on|off");
  train_cmd->add_option("--seed", tr.seed, "Seed for init, shuffling and dropout");
  train_cmd->add_option("--keep-input", tr.keep_input, "Override the input keep probability");
  int train_jobs = 1;
  train_cmd->add_option("--jobs", train_jobs, "Accepted for symmetry; training is sequential");
  train_cmd->add_option("--config", config_path, "key=value config file");

  DenoiseOptions dn;
  auto* denoise = app.add_subcommand("denoise", "Denoise one WAV file");
  denoise->add_option("--checkpoint", dn.checkpoint, "Checkpoint")->required();
  denoise->add_option("--in", dn.in, "Input WAV")->required();
  denoise->add_option("--out", dn.out, "Output WAV")->required();
  denoise->add_option("--config", config_path, "key=value config file");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a manifest split");
  evaluate->add_option("--checkpoint", ev.checkpoint, "Checkpoint");
  evaluate->add_option("--manifest", ev.manifest, "Manifest file")->required();
  evaluate->add_option("--split", ev.split, "train|val|test|all");
  evaluate->add_option("--out", ev.out, "Report CSV")->required();
  evaluate->add_option("--estimator", ev.estimator, "network|oracle|identity");
  evaluate->add_option("--seed", ev.seed, "Run seed used at prepare time");
  evaluate->add_option("--jobs", ev.jobs, "Worker threads");
  evaluate->add_option("--snr", ev.snr_db, "Mixture SNR in dB");
  evaluate->add_option("--config", config_path, "key=value config file");

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*prepare) return cmd_prepare(prep, out, err);
    if (*thresholds) return cmd_thresholds(thr, out, err);
    if (*train_cmd) return cmd_train(tr, out, err);
    if (*denoise) return cmd_denoise(dn, out, err);
    if (*evaluate) return cmd_evaluate(ev, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pamd
