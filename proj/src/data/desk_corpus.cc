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

#include "pamd/desk_corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "pamd/errors.h"

namespace pamd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller keeps the stream identical across standard libraries.
  const double u1 = std::max(uniform(rng, 0.0, 1.0), 1e-300);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void normalize_rms(std::vector<double>& x, double rms) {
  const double p = signal_power(x);
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p);
  for (double& v : x) v *= g;
}

double formant_gain(double hz, double center, double bandwidth) {
  const double d = (hz - center) / bandwidth;
  return 1.0 / (1.0 + d * d);
}

}  // namespace

AudioSignal synth_speech(double seconds, std::uint64_t seed, int sample_rate) {
  std::mt19937_64 rng(seed);
  const auto total = static_cast<std::size_t>(seconds * sample_rate);
  AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.assign(total, 0.0);

  const double base_f0 = uniform(rng, 95.0, 230.0);
  const double nyquist_guard = 0.45 * sample_rate;
  std::size_t pos = static_cast<std::size_t>(uniform(rng, 0.02, 0.1) * sample_rate);
  while (pos < total) {
    const auto len = std::min(total - pos,
                              static_cast<std::size_t>(uniform(rng, 0.12, 0.32) * sample_rate));
    const auto ramp = static_cast<std::size_t>(0.02 * sample_rate);
    const double level = uniform(rng, 0.5, 1.0);
    auto envelope = [&](std::size_t n) {
      double e = 1.0;
      if (n < ramp) e = 0.5 - 0.5 * std::cos(std::numbers::pi * n / ramp);
      if (len - n <= ramp) e = std::min(e, 0.5 - 0.5 * std::cos(std::numbers::pi * (len - n) / ramp));
      return e * level;
    };

    if (uniform(rng, 0.0, 1.0) < 0.15) {
      // Unvoiced: first-differenced white noise.
      double prev = 0.0;
      for (std::size_t n = 0; n < len; ++n) {
        const double w = gaussian(rng);
        out.samples[pos + n] += 0.35 * (w - prev) * envelope(n);
        prev = w;
      }
    } else {
      const double f0_start = base_f0 * uniform(rng, 0.85, 1.15);
      const double f0_end = f0_start * uniform(rng, 0.8, 1.2);
      const double formants[3] = {uniform(rng, 300.0, 900.0), uniform(rng, 900.0, 2400.0),
                                  uniform(rng, 2400.0, 3400.0)};
      const double bandwidths[3] = {90.0, 130.0, 200.0};
      const int harmonics = static_cast<int>(nyquist_guard / std::max(f0_start, f0_end));
      std::vector<double> phase(harmonics, 0.0);
      for (int h = 0; h < harmonics; ++h) phase[h] = uniform(rng, 0.0, kTwoPi);
      std::vector<double> amp(harmonics);
      for (int h = 0; h < harmonics; ++h) {
        const double hz = (h + 1) * 0.5 * (f0_start + f0_end);
        double g = 0.05;
        for (int k = 0; k < 3; ++k) g += formant_gain(hz, formants[k], bandwidths[k]) / (k + 1);
        amp[h] = g / std::sqrt(h + 1.0);
      }
      for (std::size_t n = 0; n < len; ++n) {
        const double f0 = f0_start + (f0_end - f0_start) * static_cast<double>(n) / len;
        double v = 0.0;
        for (int h = 0; h < harmonics; ++h) {
          phase[h] += kTwoPi * f0 * (h + 1) / sample_rate;
          v += amp[h] * std::sin(phase[h]);
        }
        out.samples[pos + n] += v * envelope(n);
      }
    }
    pos += len + static_cast<std::size_t>(uniform(rng, 0.0, 0.12) * sample_rate);
  }
  normalize_rms(out.samples, 0.05);
  return out;
}

std::string noise_type_name(NoiseType type) {
  switch (type) {
    case NoiseType::kWhite: return "white";
    case NoiseType::kPink: return "pink";
    case NoiseType::kBabble: return "babble";
    case NoiseType::kModulated: return "modulated";
  }
  return "white";
}

AudioSignal synth_noise(NoiseType type, double seconds, std::uint64_t seed, int sample_rate) {
  std::mt19937_64 rng(seed);
  const auto total = static_cast<std::size_t>(seconds * sample_rate);
  AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.assign(total, 0.0);
  switch (type) {
    case NoiseType::kWhite:
      for (double& v : out.samples) v = gaussian(rng);
      break;
    case NoiseType::kPink: {
      // Kellet's economy pink filter.
      double b0 = 0, b1 = 0, b2 = 0;
      for (double& v : out.samples) {
        const double w = gaussian(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        v = b0 + b1 + b2 + w * 0.1848;
      }
      break;
    }
    case NoiseType::kBabble:
      for (int talker = 0; talker < 6; ++talker) {
        const AudioSignal s = synth_speech(seconds, rng(), sample_rate);
        for (std::size_t i = 0; i < total; ++i) out.samples[i] += s.samples[i];
      }
      break;
    case NoiseType::kModulated: {
      const double rate = uniform(rng, 2.0, 6.0);
      double lp = 0.0;
      for (std::size_t i = 0; i < total; ++i) {
        lp = 0.7 * lp + 0.3 * gaussian(rng);
        out.samples[i] = lp * (1.0 + 0.8 * std::sin(kTwoPi * rate * i / sample_rate));
      }
      break;
    }
  }
  normalize_rms(out.samples, 0.05);
  return out;
}

std::vector<UtteranceRecord> write_desk_corpus(const std::string& dir,
                                               const DeskCorpusSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::mt19937_64 rng(spec.seed);

  const Split splits[3] = {Split::kTrain, Split::kVal, Split::kTest};
  const int counts[3] = {spec.train, spec.val, spec.test};
  std::vector<UtteranceRecord> records;
  int utterance = 0;
  for (int s = 0; s < 3; ++s) {
    const std::string split = split_name(splits[s]);
    for (int t = 0; t < kNumNoiseTypes; ++t) {
      const auto type = static_cast<NoiseType>(t);
      write_wav((fs::path(dir) / ("noise_" + split + "_" + noise_type_name(type) + ".wav")).string(),
                synth_noise(type, spec.noise_seconds, rng()));
    }
    for (int i = 0; i < counts[s]; ++i, ++utterance) {
      char name[32];
      std::snprintf(name, sizeof(name), "speech_%03d.wav", utterance);
      const double seconds = uniform(rng, spec.min_seconds, spec.max_seconds);
      write_wav((fs::path(dir) / name).string(), synth_speech(seconds, rng()));
      UtteranceRecord r;
      r.split = splits[s];
      r.clean_path = name;
      r.noise_path = "noise_" + split + "_" +
                     noise_type_name(static_cast<NoiseType>(utterance % kNumNoiseTypes)) + ".wav";
      r.seed = rng() >> 16;
      records.push_back(r);
    }
  }
  write_manifest((fs::path(dir) / "manifest.tsv").string(), records);
  return read_manifest((fs::path(dir) / "manifest.tsv").string());
}

}  // namespace pamd
