/* Copyright 2026 The clinaug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "clinaug/dataset.hpp"

#include "clinaug/errors.hpp"
#include "clinaug/rng.hpp"
#include "clinaug/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace clinaug {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// RBJ band-pass biquad (constant 0 dB peak gain).
struct Biquad {
  double b0, b1, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  Biquad(double center_hz, double q, double sample_rate) {
    const double w0 = kTwoPi * center_hz / sample_rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b1 = 0.0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }

  double operator()(double x) {
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

ToySignal random_toy_signal(ClassLabel label, std::uint64_t seed) {
  Rng rng(seed);
  ToySignal s;
  s.label = label;
  s.duration = rng.uniform(1.0, 1.1);
  s.amplitude = rng.uniform(0.3, 0.6);
  switch (label) {
    case ClassLabel::kAdjustment:  // square wave
      s.base_hz = rng.uniform(200.0, 400.0);
      break;
    case ClassLabel::kCoagulation:  // steady sine
      s.base_hz = rng.uniform(1500.0, 3000.0);
      break;
    case ClassLabel::kInsertion:  // hammer-like impulse train
      s.period_s = rng.uniform(0.05, 0.09);
      s.base_hz = rng.uniform(2000.0, 4000.0);
      break;
    case ClassLabel::kReaming:  // amplitude-modulated tone
      s.base_hz = rng.uniform(600.0, 1200.0);
      s.aux_hz = rng.uniform(6.0, 12.0);
      break;
    case ClassLabel::kSawing:  // rising chirp
      s.base_hz = rng.uniform(1500.0, 2500.0);
      s.aux_hz = rng.uniform(6000.0, 9000.0);
      break;
    case ClassLabel::kSuction:  // band-limited noise
      s.base_hz = rng.uniform(4000.0, 7000.0);
      s.aux_hz = rng.uniform(1.0, 2.0);  // filter Q
      break;
  }
  return s;
}

std::vector<float> synthesize_toy(const ToySignal& s, int sample_rate, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(s.duration * sample_rate));
  std::vector<double> y(n, 0.0);
  const double fs_d = sample_rate;
  const double phase0 = rng.uniform(0.0, kTwoPi);

  switch (s.label) {
    case ClassLabel::kAdjustment:
      for (std::size_t i = 0; i < n; ++i) {
        const double ph = std::fmod(s.base_hz * static_cast<double>(i) / fs_d + phase0 / kTwoPi, 1.0);
        y[i] = s.amplitude * (ph < 0.5 ? 1.0 : -1.0);
      }
      break;
    case ClassLabel::kCoagulation:
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = s.amplitude * std::sin(kTwoPi * s.base_hz * static_cast<double>(i) / fs_d + phase0);
      }
      break;
    case ClassLabel::kInsertion: {
      // Exponentially decaying ringing bursts at a fixed period.
      const auto period = static_cast<std::size_t>(std::llround(s.period_s * fs_d));
      const double decay = 1.0 / (0.004 * fs_d);
      const std::size_t start = static_cast<std::size_t>(rng.below(period));
      for (std::size_t onset = start; onset < n; onset += period) {
        const std::size_t len = std::min<std::size_t>(period, n - onset);
        for (std::size_t j = 0; j < len; ++j) {
          const double env = std::exp(-decay * static_cast<double>(j));
          const double ring = std::sin(kTwoPi * s.base_hz * static_cast<double>(j) / fs_d);
          y[onset + j] += s.amplitude * env * (0.7 * ring + 0.3 * rng.normal());
        }
      }
      break;
    }
    case ClassLabel::kReaming:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs_d;
        const double env = 0.5 * (1.0 + std::sin(kTwoPi * s.aux_hz * t));
        y[i] = s.amplitude * env * std::sin(kTwoPi * s.base_hz * t + phase0);
      }
      break;
    case ClassLabel::kSawing: {
      const double rate = (s.aux_hz - s.base_hz) / s.duration;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs_d;
        y[i] = s.amplitude * std::sin(kTwoPi * (s.base_hz * t + 0.5 * rate * t * t) + phase0);
      }
      break;
    }
    case ClassLabel::kSuction: {
      Biquad first(s.base_hz, s.aux_hz, fs_d);
      Biquad second(s.base_hz, s.aux_hz, fs_d);
      for (std::size_t i = 0; i < n; ++i) y[i] = second(first(rng.normal()));
      double peak = 0.0;
      for (double v : y) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) {
        for (double& v : y) v *= s.amplitude / peak;
      }
      break;
    }
  }

  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(std::clamp(y[i] + s.noise_floor * rng.normal(), -1.0, 1.0));
  }
  return out;
}

DatasetManifest make_toy_corpus(const fs::path& out_dir, int n_per_class, std::uint64_t seed) {
  if (n_per_class < 5) {
    throw Error("toy corpus needs at least 5 clips per class, got " + std::to_string(n_per_class));
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error("cannot create directory '" + out_dir.string() + "'");
  }

  const fs::path labels = out_dir / "labels.csv";
  std::ofstream table(labels, std::ios::trunc);
  if (!table) throw Error("cannot write '" + labels.string() + "'");
  table << "path,label\n";

  for (ClassLabel c : kAllClasses) {
    const std::string name(class_name(c));
    for (int i = 0; i < n_per_class; ++i) {
      const std::uint64_t clip_seed = derive_seed(seed, name, i);
      const ToySignal signal = random_toy_signal(c, clip_seed);
      const auto samples = synthesize_toy(signal, kDefaultSampleRate, clip_seed ^ 0x5bd1e995ULL);
      char file[64];
      std::snprintf(file, sizeof file, "%s_%03d.wav", name.c_str(), i);
      write_wav_pcm16(out_dir / file, samples, kDefaultSampleRate);
      table << file << ',' << name << '\n';
    }
  }
  table.close();
  if (!table) throw Error("failed writing '" + labels.string() + "'");
  return load_manifest(out_dir, labels);
}

}  // namespace clinaug
