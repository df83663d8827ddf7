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

#pragma once

#include "clinaug/spectrogram.hpp"
#include "clinaug/stft.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace clinaug {

struct AudioClip;

struct MelConfig {
  int window_len = 16380;  // samples per analysis window
  int hop = 256;
  int n_mels = 64;
  int n_fft = 1024;
  int sample_rate = 44100;
  double fmin = 0.0;
  double fmax = 22050.0;
  double log_floor = 1e-10;
  std::string window = "hann";

  // Frames per window under centered framing.
  int frames() const { return 1 + window_len / hop; }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

nlohmann::json to_json(const MelConfig& cfg);
MelConfig mel_config_from_json(const nlohmann::json& doc);

// Slaney-style mel scale (linear below 1 kHz, logarithmic above).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular, area-normalized filters; n_mels rows by n_fft/2+1 columns.
Eigen::MatrixXd mel_filterbank(const MelConfig& cfg);

// Center frequency of each mel filter in Hz.
std::vector<double> mel_center_frequencies(const MelConfig& cfg);

// Non-overlapping windows of exactly window_len samples; the tail is dropped.
std::vector<std::vector<float>> extract_windows(const AudioClip& clip, const MelConfig& cfg);

// Computes log(mel(|STFT|^2) + log_floor) for windows of the configured
// length. Holds the filterbank and FFT plans, so reuse one instance.
class LogMelExtractor {
 public:
  explicit LogMelExtractor(MelConfig cfg);

  const MelConfig& config() const { return cfg_; }
  const Eigen::MatrixXd& filterbank() const { return filterbank_; }

  // Unnormalized spectrogram; label and ids are left for the caller.
  Spectrogram operator()(std::span<const float> window) const;

  // Mel power (before the log) of an arbitrary power spectrogram.
  Eigen::MatrixXd project(const Eigen::MatrixXd& power) const;

  // All windows of a clip, labeled and indexed.
  std::vector<Spectrogram> clip_spectrograms(const AudioClip& clip) const;

 private:
  MelConfig cfg_;
  Eigen::MatrixXd filterbank_;
  Stft stft_;
};

Spectrogram log_mel(std::span<const float> window, const MelConfig& cfg);

}  // namespace clinaug
