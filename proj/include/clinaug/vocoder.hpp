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

#include "clinaug/mel.hpp"
#include "clinaug/spectrogram.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clinaug {

enum class MelInversion { kPseudoInverse, kNnls };

struct GriffinLimConfig {
  int n_iters = 60;
  double momentum = 0.99;
  MelInversion inversion = MelInversion::kNnls;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const GriffinLimConfig& cfg);
GriffinLimConfig griffin_lim_config_from_json(const nlohmann::json& doc);

struct LinearMagnitude {
  Eigen::MatrixXd magnitude;  // (n_fft / 2 + 1) x frames, non-negative
  double clamp_fraction = 0.0;
};

// Mel power spectrogram (n_mels x frames, already exponentiated) to linear
// magnitude. Pseudo-inverse mode clamps negative power to zero and reports the
// clamped fraction; NNLS mode solves min ||M p - mel||, p >= 0 per frame.
LinearMagnitude mel_to_linear(const Eigen::MatrixXd& mel_power, const MelConfig& cfg,
                              MelInversion mode);

// Denormalized log-mel spectrogram to mel power: exp(x) - log_floor, floored at 0.
Eigen::MatrixXd mel_power_from_log(const Spectrogram& spec, const MelConfig& cfg);

struct GriffinLimResult {
  std::vector<float> samples;
  // ||(|STFT(x)| - mag)||_F / ||mag||_F after each iteration.
  std::vector<double> spectral_convergence;
};

// Iterative phase recovery (momentum-accelerated unless momentum == 0).
// Output length is window_len when the frame count matches the mel config,
// otherwise (frames - 1) * hop.
GriffinLimResult griffin_lim(const Eigen::MatrixXd& magnitude, const MelConfig& cfg,
                             const GriffinLimConfig& gl);

double spectral_convergence(std::span<const float> signal, const Eigen::MatrixXd& magnitude,
                            const MelConfig& cfg);

// Scales so that max |x| == 1; silent input is returned unchanged.
void peak_normalize(std::vector<float>& samples);

// Full inversion of one normalized or unnormalized log-mel spectrogram.
std::vector<float> spectrogram_to_audio(const Spectrogram& spec, const NormStats& norm,
                                        const MelConfig& cfg, const GriffinLimConfig& gl);

}  // namespace clinaug
