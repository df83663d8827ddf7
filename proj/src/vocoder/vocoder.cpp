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

#include "clinaug/vocoder.hpp"

#include "clinaug/config_fields.hpp"
#include "clinaug/errors.hpp"
#include "clinaug/rng.hpp"
#include "clinaug/stft.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace clinaug {

void GriffinLimConfig::validate() const {
  if (n_iters < 1) throw ConfigError("griffin_lim.n_iters: must be >= 1");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("griffin_lim.momentum: must be in [0, 1)");
}

nlohmann::json to_json(const GriffinLimConfig& cfg) {
  return {{"n_iters", cfg.n_iters},
          {"momentum", cfg.momentum},
          {"inversion", cfg.inversion == MelInversion::kNnls ? "nnls" : "pinv"},
          {"seed", cfg.seed}};
}

GriffinLimConfig griffin_lim_config_from_json(const nlohmann::json& doc) {
  GriffinLimConfig cfg;
  ConfigFields f(doc, "griffin_lim");
  std::string mode = "nnls";
  f.read("n_iters", cfg.n_iters).read("momentum", cfg.momentum).read("seed", cfg.seed);
  f.read("inversion", mode);
  f.finish();
  if (mode == "nnls") {
    cfg.inversion = MelInversion::kNnls;
  } else if (mode == "pinv") {
    cfg.inversion = MelInversion::kPseudoInverse;
  } else {
    throw ConfigError("griffin_lim.inversion: expected 'nnls' or 'pinv', got '" + mode + "'");
  }
  cfg.validate();
  return cfg;
}

Eigen::MatrixXd mel_power_from_log(const Spectrogram& spec, const MelConfig& cfg) {
  if (spec.normalized) throw Error("mel_power_from_log expects a denormalized spectrogram");
  Eigen::MatrixXd p(spec.n_mels, spec.n_frames);
  for (int m = 0; m < spec.n_mels; ++m) {
    for (int t = 0; t < spec.n_frames; ++t) {
      p(m, t) = std::max(0.0, std::exp(static_cast<double>(spec.at(m, t))) - cfg.log_floor);
    }
  }
  return p;
}

namespace {

// Projected accelerated gradient for min ||A P - B||_F^2, P >= 0, solved for
// all columns at once.
Eigen::MatrixXd nnls(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& init,
                     int iters) {
  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::MatrixXd atb = a.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ata, Eigen::EigenvaluesOnly);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  if (!(lipschitz > 0.0)) return Eigen::MatrixXd::Zero(a.cols(), b.cols());
  const double step = 1.0 / lipschitz;

  Eigen::MatrixXd x = init.cwiseMax(0.0);
  Eigen::MatrixXd y = x;
  double t = 1.0;
  for (int k = 0; k < iters; ++k) {
    const Eigen::MatrixXd next = (y - step * (ata * y - atb)).cwiseMax(0.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    x = next;
    t = t_next;
  }
  return x;
}

}  // namespace

LinearMagnitude mel_to_linear(const Eigen::MatrixXd& mel_power, const MelConfig& cfg,
                              MelInversion mode) {
  const Eigen::MatrixXd fb = mel_filterbank(cfg);
  if (mel_power.rows() != fb.rows()) {
    throw Error("mel_to_linear: expected " + std::to_string(fb.rows()) + " mel rows, got " +
                std::to_string(mel_power.rows()));
  }
  const Eigen::MatrixXd pinv = fb.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd power = pinv * mel_power;

  LinearMagnitude out;
  const auto negative = (power.array() < 0.0).count();
  out.clamp_fraction = power.size() > 0 ? static_cast<double>(negative) / power.size() : 0.0;
  if (mode == MelInversion::kNnls) power = nnls(fb, mel_power, power, 300);
  out.magnitude = power.cwiseMax(0.0).cwiseSqrt();
  return out;
}

double spectral_convergence(std::span<const float> signal, const Eigen::MatrixXd& magnitude,
                            const MelConfig& cfg) {
  const Stft stft(cfg.n_fft, cfg.hop);
  const ComplexSpec s = stft.forward(signal);
  if (s.rows() != magnitude.rows() || s.cols() != magnitude.cols()) {
    throw Error("spectral_convergence: shape mismatch");
  }
  const double denom = magnitude.norm();
  if (denom == 0.0) return 0.0;
  return (s.cwiseAbs() - magnitude).norm() / denom;
}

GriffinLimResult griffin_lim(const Eigen::MatrixXd& magnitude, const MelConfig& cfg,
                             const GriffinLimConfig& gl) {
  gl.validate();
  if ((magnitude.array() < 0.0).any()) throw Error("griffin_lim expects a non-negative magnitude");
  const Stft stft(cfg.n_fft, cfg.hop);
  if (magnitude.rows() != stft.bins()) {
    throw Error("griffin_lim: magnitude has " + std::to_string(magnitude.rows()) +
                " bins, expected " + std::to_string(stft.bins()));
  }
  const auto frames = static_cast<std::size_t>(magnitude.cols());
  const std::size_t length = static_cast<int>(frames) == cfg.frames()
                                 ? static_cast<std::size_t>(cfg.window_len)
                                 : (frames - 1) * static_cast<std::size_t>(cfg.hop);

  GriffinLimResult result;
  const double mag_norm = magnitude.norm();
  if (mag_norm == 0.0) {
    result.samples.assign(length, 0.0f);
    result.spectral_convergence.assign(static_cast<std::size_t>(gl.n_iters), 0.0);
    return result;
  }

  Rng rng(gl.seed);
  ComplexSpec angles(magnitude.rows(), magnitude.cols());
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    angles(i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }
  const double eps = 1e-16;
  const double blend = gl.momentum / (1.0 + gl.momentum);
  ComplexSpec rebuilt = ComplexSpec::Zero(magnitude.rows(), magnitude.cols());

  for (int it = 0; it < gl.n_iters; ++it) {
    const ComplexSpec previous = rebuilt;
    const auto signal = stft.inverse(magnitude.cast<std::complex<double>>().cwiseProduct(angles), length);
    rebuilt = stft.forward(signal);
    result.spectral_convergence.push_back((rebuilt.cwiseAbs() - magnitude).norm() / mag_norm);
    angles = rebuilt - blend * previous;
    for (Eigen::Index i = 0; i < angles.size(); ++i) angles(i) /= std::abs(angles(i)) + eps;
  }
  result.samples = stft.inverse(magnitude.cast<std::complex<double>>().cwiseProduct(angles), length);
  for (float v : result.samples) {
    if (!std::isfinite(v)) throw Error("griffin_lim produced a non-finite sample");
  }
  return result;
}

void peak_normalize(std::vector<float>& samples) {
  float peak = 0.0f;
  for (float v : samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f) {
    for (float& v : samples) v /= peak;
  }
}

std::vector<float> spectrogram_to_audio(const Spectrogram& spec, const NormStats& norm,
                                        const MelConfig& cfg, const GriffinLimConfig& gl) {
  const Spectrogram raw = spec.normalized ? invert_norm(spec, norm) : spec;
  const auto mag = mel_to_linear(mel_power_from_log(raw, cfg), cfg, gl.inversion);
  auto result = griffin_lim(mag.magnitude, cfg, gl);
  peak_normalize(result.samples);
  return std::move(result.samples);
}

}  // namespace clinaug
