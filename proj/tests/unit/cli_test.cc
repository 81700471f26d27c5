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

#include <cmath>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "pamd/checkpoint.h"
#include "pamd/desk_corpus.h"
#include "pamd/psychoacoustics.h"
#include "test_util.h"

namespace pamd {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "pamd");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliCorpus : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    DeskCorpusSpec spec;
    spec.train = 2;
    spec.val = 1;
    spec.test = 1;
    spec.min_seconds = 1.5;
    spec.max_seconds = 1.6;
    spec.noise_seconds = 2.0;
    write_desk_corpus(dir_->path().string(), spec);
  }
  static void TearDownTestSuite() { delete dir_; }
  static std::string file(const std::string& name) { return dir_->file(name); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliCorpus::dir_ = nullptr;

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"prepare", "--manifest"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--cache", "x", "--out", "y", "--perceptual", "maybe"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, PrepareEmptyManifest) {
  testing::TempDir dir("cli_empty");
  std::ofstream(dir.file("m.tsv")) << "# nothing here\n";
  const CliRun r = run({"prepare", "--manifest", dir.file("m.tsv"), "--out", dir.file("cache")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("no records"), std::string::npos);
}

TEST(Cli, ThresholdsOnSilenceEqualThresholdInQuiet) {
  testing::TempDir dir("cli_silence");
  AudioSignal silence;
  silence.samples.assign(4096, 0.0);
  write_wav(dir.file("s.wav"), silence);
  const CliRun r = run({"thresholds", "--wav", dir.file("s.wav"), "--frame", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = read_csv(r.out);
  ASSERT_EQ(rows.size(), 514u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"bin_hz", "psd_db", "ath_db",
                                                "global_threshold_db", "weight"}));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double hz = std::stod(rows[k][0]);
    EXPECT_EQ(std::stod(rows[k][3]), absolute_threshold(hz)) << k;
  }
  EXPECT_NE(r.err.find("tonal maskers: 0"), std::string::npos);
  EXPECT_NE(r.err.find("[thresholds]"), std::string::npos);
}

TEST(Cli, ThresholdsOnToneReportOneMasker) {
  // At 4 kHz a 1 kHz sine samples to 0, A, 0, -A: the 16-bit file holds the
  // tone without quantization error (at 16 kHz the error is periodic and
  // shows up as genuine tonal lines at the odd harmonics).
  testing::TempDir dir("cli_tone");
  write_wav(dir.file("t.wav"), testing::sine(8192, 1000.0, 1000.0 / 32767.0, 4000));
  const CliRun r = run({"thresholds", "--wav", dir.file("t.wav"), "--frame", "5", "--out",
                        dir.file("t.csv"), "--maskers", dir.file("m.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("tonal maskers: 1"), std::string::npos) << r.err;
  const auto maskers = read_csv(slurp(dir.file("m.csv")));
  ASSERT_EQ(maskers.size(), 2u);
  EXPECT_EQ(maskers[1][0], "256");
  EXPECT_EQ(std::stod(maskers[1][1]), 1000.0);
  const auto rows = read_csv(slurp(dir.file("t.csv")));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double p = std::stod(rows[k][1]), g = std::stod(rows[k][3]);
    EXPECT_NEAR(std::stod(rows[k][4]), perceptual_weight(p, g), 1e-9);
  }
  EXPECT_EQ(run({"thresholds", "--wav", dir.file("t.wav"), "--frame", "99"}).code, kExitUsage);
}

TEST_F(CliCorpus, PrepareIsDeterministic) {
  const CliRun a = run({"prepare", "--manifest", file("manifest.tsv"), "--out", file("c1"), "--seed", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const CliRun b = run({"prepare", "--manifest", file("manifest.tsv"), "--out", file("c2"), "--seed",
                     "3", "--jobs", "2"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  const std::string index = slurp(file("c1/index.tsv"));
  EXPECT_EQ(index, slurp(file("c2/index.tsv")));
  const auto report = read_csv(slurp(file("c1/prepare_report.csv")));
  ASSERT_EQ(report.size(), 5u);
  for (std::size_t i = 1; i < report.size(); ++i) {
    EXPECT_NEAR(std::stod(report[i][2]), 0.0, 1e-6);
    EXPECT_EQ(report[i][5], "ok");
  }
  std::stringstream ss(index);
  std::string line;
  std::getline(ss, line);
  int entries = 0;
  while (std::getline(ss, line)) {
    const std::string cache = line.substr(0, line.rfind('\t'));
    const std::string name = cache.substr(cache.rfind('\t') + 1);
    EXPECT_EQ(slurp(file("c1/" + name)), slurp(file("c2/" + name)));
    ++entries;
  }
  EXPECT_EQ(entries, 4);
}

TEST_F(CliCorpus, PrepareReportsUnreadableFiles) {
  std::ofstream(file("broken.tsv")) << "train\tmissing.wav\tmissing_noise.wav\t1\n";
  const CliRun r = run({"prepare", "--manifest", file("broken.tsv"), "--out", file("cb")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(slurp(file("cb/prepare_report.csv")).find("failed"), std::string::npos);
}

TEST_F(CliCorpus, TrainDenoiseEvaluate) {
  ASSERT_EQ(run({"prepare", "--manifest", file("manifest.tsv"), "--out", file("tc")}).code, kExitOk);
  const CliRun t0 = run({"train", "--cache", file("tc"), "--out", file("e0.ckpt"), "--epochs", "0",
                      "--hidden", "16", "--seed", "4"});
  ASSERT_EQ(t0.code, kExitOk) << t0.err;
  const Checkpoint ck0 = load_checkpoint(file("e0.ckpt"));
  EXPECT_EQ(ck0.params.layers[0].weight, init_params({513, 16, 513}, 4).layers[0].weight);
  EXPECT_EQ(read_csv(slurp(file("e0.ckpt.loss.csv"))).size(), 2u);

  const std::vector<std::string> train_args = {"train", "--cache", file("tc"), "--epochs", "3",
                                               "--hidden", "16", "--seed", "4", "--perceptual", "on"};
  auto with_out = [&](const std::string& name) {
    auto a = train_args;
    a.push_back("--out");
    a.push_back(file(name));
    return a;
  };
  const CliRun t1 = run(with_out("a.ckpt"));
  ASSERT_EQ(t1.code, kExitOk) << t1.err;
  ASSERT_EQ(run(with_out("b.ckpt")).code, kExitOk);
  EXPECT_EQ(slurp(file("a.ckpt")), slurp(file("b.ckpt")));
  EXPECT_EQ(slurp(file("a.ckpt.loss.csv")), slurp(file("b.ckpt.loss.csv")));
  EXPECT_NE(t1.err.find("perceptual=on"), std::string::npos);
  EXPECT_TRUE(load_checkpoint(file("a.ckpt")).config.use_perceptual_weights);

  const std::string noisy = dir_->path().string() + "/speech_000.wav";
  const CliRun d = run({"denoise", "--checkpoint", file("a.ckpt"), "--in", noisy, "--out", file("d.wav")});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  EXPECT_EQ(read_wav(file("d.wav")).size(), read_wav(noisy).size());

  const CliRun e = run({"evaluate", "--checkpoint", file("a.ckpt"), "--manifest",
                     file("manifest.tsv"), "--out", file("report.csv")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const auto rows = read_csv(slurp(file("report.csv")));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows.back()[0], "AGGREGATE");
  EXPECT_EQ(rows[1][1], rows[2][1]);
  EXPECT_NEAR(std::stod(rows[2][5]), std::stod(rows[1][5]), 1e-4 * std::abs(std::stod(rows[1][5])) + 1e-5);
}

TEST_F(CliCorpus, DenoiseSilenceAndShortInput) {
  ASSERT_EQ(run({"prepare", "--manifest", file("manifest.tsv"), "--out", file("sc")}).code, kExitOk);
  ASSERT_EQ(run({"train", "--cache", file("sc"), "--out", file("s.ckpt"), "--epochs", "0",
                 "--hidden", "8"}).code,
            kExitOk);
  AudioSignal silence;
  silence.samples.assign(5000, 0.0);
  write_wav(file("silence.wav"), silence);
  ASSERT_EQ(run({"denoise", "--checkpoint", file("s.ckpt"), "--in", file("silence.wav"), "--out",
                 file("silence_out.wav")}).code,
            kExitOk);
  const AudioSignal out = read_wav(file("silence_out.wav"));
  ASSERT_EQ(out.size(), 5000u);
  for (double v : out.samples) EXPECT_EQ(v, 0.0);

  const AudioSignal shorty = testing::white_noise(500, 1, 0.1);
  write_wav(file("short.wav"), shorty);
  ASSERT_EQ(run({"denoise", "--checkpoint", file("s.ckpt"), "--in", file("short.wav"), "--out",
                 file("short_out.wav")}).code,
            kExitOk);
  EXPECT_EQ(read_wav(file("short_out.wav")).samples, read_wav(file("short.wav")).samples);

  AudioSignal other = testing::white_noise(5000, 1, 0.1);
  other.sample_rate = 8000;
  write_wav(file("8k.wav"), other);
  EXPECT_EQ(run({"denoise", "--checkpoint", file("s.ckpt"), "--in", file("8k.wav"), "--out",
                 file("8k_out.wav")}).code,
            kExitData);
  EXPECT_EQ(run({"denoise", "--checkpoint", file("nope.ckpt"), "--in", file("8k.wav"), "--out",
                 file("x.wav")}).code,
            kExitData);
}

TEST_F(CliCorpus, EvaluateOracleAndFailures) {
  const CliRun ok = run({"evaluate", "--estimator", "oracle", "--manifest", file("manifest.tsv"),
                      "--split", "all", "--out", file("oracle.csv")});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  const auto rows = read_csv(slurp(file("oracle.csv")));
  ASSERT_EQ(rows.size(), 6u);
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double len = std::stod(rows[i][1]);
    total += len;
    weighted += len * std::stod(rows[i][5]);
  }
  EXPECT_NEAR(std::stod(rows.back()[5]), weighted / total, 1e-4);

  std::ofstream(file("missing.tsv")) << "test\tmissing.wav\tnoise_test_white.wav\t1\n";
  const CliRun bad = run({"evaluate", "--estimator", "oracle", "--manifest", file("missing.tsv"),
                       "--out", file("bad.csv")});
  EXPECT_EQ(bad.code, kExitData);
  EXPECT_NE(slurp(file("bad.csv")).find("nan"), std::string::npos);
  EXPECT_EQ(run({"evaluate", "--manifest", file("manifest.tsv"), "--out", file("x.csv")}).code,
            kExitUsage);
}

TEST_F(CliCorpus, ConfigFilePrecedence) {
  std::ofstream(file("train.cfg")) << "# training defaults\nhidden = 8\nepochs = 1\nseed = 9\n";
  ASSERT_EQ(run({"prepare", "--manifest", file("manifest.tsv"), "--out", file("pc")}).code, kExitOk);
  const CliRun r = run({"train", "--config", file("train.cfg"), "--cache", file("pc"), "--out",
                     file("cfg.ckpt"), "--epochs", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("topology=513,8,513"), std::string::npos);
  EXPECT_NE(r.err.find("epochs=2"), std::string::npos);
  EXPECT_NE(r.err.find("seed=9"), std::string::npos);
  EXPECT_NE(r.err.find("lr=0.001"), std::string::npos);
  EXPECT_EQ(load_checkpoint(file("cfg.ckpt")).config.epochs, 2);
}

TEST(Cli, MergeConfigInsertsMissingKeys) {
  testing::TempDir dir("cli_cfg");
  std::ofstream(dir.file("c.cfg")) << "a = 1\nb=2\n\n# c=3\n";
  const auto merged =
      merge_config({"pamd", "cmd", "--config", dir.file("c.cfg"), "--b", "5"});
  EXPECT_EQ(merged, (std::vector<std::string>{"pamd", "cmd", "--a", "1", "--config",
                                              dir.file("c.cfg"), "--b", "5"}));
  std::ofstream(dir.file("bad.cfg")) << "novalue\n";
  EXPECT_EQ(run({"train", "--config", dir.file("bad.cfg"), "--cache", "x", "--out", "y"}).code,
            kExitUsage);
}

}  // namespace
}  // namespace pamd
