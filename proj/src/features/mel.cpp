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

#include "clinaug/mel.hpp"

#include "clinaug/dataset.hpp"
#include "clinaug/config_fields.hpp"
#include "clinaug/errors.hpp"

#include <cmath>
#include <string>

namespace clinaug {

namespace {
constexpr double kLinearStep = 200.0 / 3.0;
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = kMinLogHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("mel." + field + ": " + why);
}
}  // namespace

void MelConfig::validate() const {
  require(window_len > 0, "window_len", "must be positive");
  require(hop > 0, "hop", "must be positive");
  require(n_fft > 1, "n_fft", "must be at least 2");
  require(n_mels > 0, "n_mels", "must be positive");
  require(sample_rate > 0, "sample_rate", "must be positive");
  require(fmin >= 0.0 && fmin < fmax, "fmin", "must satisfy 0 <= fmin < fmax");
  require(fmax <= sample_rate / 2.0, "fmax", "must not exceed sample_rate / 2");
  require(log_floor > 0.0, "log_floor", "must be positive");
  require(window == "hann", "window", "only 'hann' is supported");
}

nlohmann::json to_json(const MelConfig& cfg) {
  return {{"window_len", cfg.window_len}, {"hop", cfg.hop},           {"n_mels", cfg.n_mels},
          {"n_fft", cfg.n_fft},           {"sample_rate", cfg.sample_rate},
          {"fmin", cfg.fmin},             {"fmax", cfg.fmax},         {"log_floor", cfg.log_floor},
          {"window", cfg.window}};
}

MelConfig mel_config_from_json(const nlohmann::json& doc) {
  MelConfig cfg;
  ConfigFields f(doc, "mel");
  f.read("window_len", cfg.window_len).read("hop", cfg.hop).read("n_mels", cfg.n_mels);
  f.read("n_fft", cfg.n_fft).read("sample_rate", cfg.sample_rate).read("fmin", cfg.fmin);
  cfg.fmax = cfg.sample_rate / 2.0;
  f.read("fmax", cfg.fmax).read("log_floor", cfg.log_floor).read("window", cfg.window);
  f.finish();
  cfg.validate();
  return cfg;
}

double hz_to_mel(double hz) {
  if (hz < kMinLogHz) return hz / kLinearStep;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMinLogMel) return mel * kLinearStep;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

namespace {
std::vector<double> mel_edges(const MelConfig& cfg) {
  const double lo = hz_to_mel(cfg.fmin);
  const double hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_mels + 2));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (cfg.n_mels + 1));
  }
  return edges;
}
}  // namespace

std::vector<double> mel_center_frequencies(const MelConfig& cfg) {
  const auto edges = mel_edges(cfg);
  return {edges.begin() + 1, edges.end() - 1};
}

Eigen::MatrixXd mel_filterbank(const MelConfig& cfg) {
  cfg.validate();
  const int bins = cfg.n_fft / 2 + 1;
  const auto edges = mel_edges(cfg);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(cfg.n_mels, bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    const double norm = 2.0 / (right - left);
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * cfg.sample_rate / cfg.n_fft;
      const double rising = (f - left) / (center - left);
      const double falling = (right - f) / (right - center);
      fb(m, b) = norm * std::max(0.0, std::min(rising, falling));
    }
  }
  return fb;
}

std::vector<std::vector<float>> extract_windows(const AudioClip& clip, const MelConfig& cfg) {
  const auto len = static_cast<std::size_t>(cfg.window_len);
  std::vector<std::vector<float>> windows;
  for (std::size_t start = 0; start + len <= clip.samples.size(); start += len) {
    windows.emplace_back(clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
                         clip.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
  }
  return windows;
}

LogMelExtractor::LogMelExtractor(MelConfig cfg)
    : cfg_(std::move(cfg)), filterbank_(mel_filterbank(cfg_)), stft_(cfg_.n_fft, cfg_.hop) {}

Eigen::MatrixXd LogMelExtractor::project(const Eigen::MatrixXd& power) const {
  return filterbank_ * power;
}

Spectrogram LogMelExtractor::operator()(std::span<const float> window) const {
  if (window.size() != static_cast<std::size_t>(cfg_.window_len)) {
    throw Error("log-mel window has " + std::to_string(window.size()) + " samples, expected " +
                std::to_string(cfg_.window_len));
  }
  const ComplexSpec spec = stft_.forward(window);
  const Eigen::MatrixXd power = spec.cwiseAbs2();
  const Eigen::MatrixXd mel = filterbank_ * power;

  Spectrogram out(cfg_.n_mels, static_cast<int>(mel.cols()));
  for (int m = 0; m < out.n_mels; ++m) {
    for (int t = 0; t < out.n_frames; ++t) {
      out.at(m, t) = static_cast<float>(std::log(mel(m, t) + cfg_.log_floor));
    }
  }
  if (!out.all_finite()) throw Error("non-finite value in log-mel spectrogram");
  return out;
}

std::vector<Spectrogram> LogMelExtractor::clip_spectrograms(const AudioClip& clip) const {
  std::vector<Spectrogram> out;
  const auto windows = extract_windows(clip, cfg_);
  out.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    Spectrogram s = (*this)(windows[i]);
    s.label = clip.label;
    s.clip_id = clip.clip_id;
    s.window_index = static_cast<int>(i);
    out.push_back(std::move(s));
  }
  return out;
}

Spectrogram log_mel(std::span<const float> window, const MelConfig& cfg) {
  return LogMelExtractor(cfg)(window);
}

}  // namespace clinaug
