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

#include "clinaug/classic_augment.hpp"

#include "clinaug/config_fields.hpp"
#include "clinaug/errors.hpp"
#include "clinaug/rng.hpp"
#include "clinaug/stft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace clinaug {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("classic." + field + ": " + why);
}

double wrap_phase(double x) { return x - 2.0 * kPi * std::round(x / (2.0 * kPi)); }

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

void ClassicAugmentConfig::validate() const {
  require(noise_sigma >= 0.0, "noise_sigma", "must be >= 0");
  require(stretch_factor > 0.0, "stretch_factor", "must be > 0");
  require(std::abs(pitch_semitones) <= 12.0, "pitch_semitones", "must be within [-12, 12]");
  require(vocoder_n_fft >= 4 && vocoder_hop >= 1 && vocoder_hop <= vocoder_n_fft, "vocoder_n_fft",
          "requires n_fft >= 4 and 1 <= hop <= n_fft");
  require(specaug.freq_mask_max >= 0 && specaug.freq_mask_max < 64, "specaug.freq_mask_max",
          "must be in [0, 64)");
  require(specaug.time_mask_max >= 0 && specaug.time_mask_max < 64, "specaug.time_mask_max",
          "must be in [0, 64)");
  require(specaug.time_warp_max >= 0 && specaug.time_warp_max < 64, "specaug.time_warp_max",
          "must be in [0, 64)");
  require(specaug.n_freq_masks >= 0, "specaug.n_freq_masks", "must be >= 0");
  require(specaug.n_time_masks >= 0, "specaug.n_time_masks", "must be >= 0");
}

nlohmann::json to_json(const ClassicAugmentConfig& cfg) {
  return {{"noise_mu", cfg.noise_mu},
          {"noise_sigma", cfg.noise_sigma},
          {"pitch_semitones", cfg.pitch_semitones},
          {"stretch_factor", cfg.stretch_factor},
          {"vocoder_n_fft", cfg.vocoder_n_fft},
          {"vocoder_hop", cfg.vocoder_hop},
          {"specaug",
           {{"n_freq_masks", cfg.specaug.n_freq_masks},
            {"freq_mask_max", cfg.specaug.freq_mask_max},
            {"n_time_masks", cfg.specaug.n_time_masks},
            {"time_mask_max", cfg.specaug.time_mask_max},
            {"time_warp_max", cfg.specaug.time_warp_max},
            {"mask_value", cfg.specaug.mask_value}}}};
}

ClassicAugmentConfig classic_augment_config_from_json(const nlohmann::json& doc) {
  ClassicAugmentConfig cfg;
  ConfigFields f(doc, "classic");
  f.read("noise_mu", cfg.noise_mu).read("noise_sigma", cfg.noise_sigma);
  f.read("pitch_semitones", cfg.pitch_semitones).read("stretch_factor", cfg.stretch_factor);
  f.read("vocoder_n_fft", cfg.vocoder_n_fft).read("vocoder_hop", cfg.vocoder_hop);
  if (f.has("specaug")) {
    auto& d = cfg.specaug;
    ConfigFields s(f.at("specaug"), "classic.specaug");
    s.read("n_freq_masks", d.n_freq_masks).read("freq_mask_max", d.freq_mask_max);
    s.read("n_time_masks", d.n_time_masks).read("time_mask_max", d.time_mask_max);
    s.read("time_warp_max", d.time_warp_max).read("mask_value", d.mask_value);
    s.finish();
  }
  f.finish();
  cfg.validate();
  return cfg;
}

std::string_view strategy_name(ClassicStrategy strategy) {
  switch (strategy) {
    case ClassicStrategy::kNoise: return "noise";
    case ClassicStrategy::kPitch: return "pitch";
    case ClassicStrategy::kStretch: return "stretch";
    case ClassicStrategy::kSpecAugment: return "specaugment";
  }
  return "unknown";
}

AudioClip add_noise(const AudioClip& clip, double mu, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error("noise sigma must be >= 0");
  AudioClip out = clip;
  if (sigma == 0.0 && mu == 0.0) return out;
  Rng rng(seed);
  for (float& s : out.samples) s = static_cast<float>(s + rng.normal(mu, sigma));
  return out;
}

std::vector<float> phase_vocoder_stretch(std::span<const float> signal, double factor, int n_fft,
                                         int hop) {
  if (!(factor > 0.0)) throw Error("stretch factor must be > 0");
  if (signal.size() < static_cast<std::size_t>(n_fft)) {
    throw Error("signal of " + std::to_string(signal.size()) +
                " samples is shorter than the phase-vocoder frame (" + std::to_string(n_fft) + ")");
  }
  const auto out_len = static_cast<std::size_t>(std::llround(signal.size() / factor));
  if (out_len < static_cast<std::size_t>(n_fft)) {
    throw Error("stretch factor " + std::to_string(factor) +
                " leaves less than one phase-vocoder frame");
  }

  const Stft stft(n_fft, hop);
  const ComplexSpec in = stft.forward(signal);
  const Eigen::Index bins = in.rows();
  const Eigen::Index frames = in.cols();

  std::vector<double> advance(static_cast<std::size_t>(bins));
  for (Eigen::Index b = 0; b < bins; ++b) {
    advance[b] = 2.0 * kPi * static_cast<double>(hop) * static_cast<double>(b) / n_fft;
  }

  std::vector<double> steps;
  for (double t = 0.0; t < static_cast<double>(frames); t += factor) steps.push_back(t);

  auto column = [&](Eigen::Index t, Eigen::Index b) -> std::complex<double> {
    return t < frames ? in(b, t) : std::complex<double>{0.0, 0.0};
  };

  ComplexSpec out(bins, static_cast<Eigen::Index>(steps.size()));
  std::vector<double> phase(static_cast<std::size_t>(bins));
  for (Eigen::Index b = 0; b < bins; ++b) phase[b] = std::arg(in(b, 0));

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto t0 = static_cast<Eigen::Index>(steps[k]);
    const double alpha = steps[k] - static_cast<double>(t0);
    for (Eigen::Index b = 0; b < bins; ++b) {
      const auto c0 = column(t0, b);
      const auto c1 = column(t0 + 1, b);
      const double mag = (1.0 - alpha) * std::abs(c0) + alpha * std::abs(c1);
      out(b, static_cast<Eigen::Index>(k)) = std::polar(mag, phase[b]);
      const double dphase = wrap_phase(std::arg(c1) - std::arg(c0) - advance[b]);
      phase[b] += advance[b] + dphase;
    }
  }
  return stft.inverse(out, out_len);
}

AudioClip time_stretch(const AudioClip& clip, double factor, int n_fft, int hop) {
  AudioClip out = clip;
  if (factor == 1.0) return out;
  out.samples = phase_vocoder_stretch(clip.samples, factor, n_fft, hop);
  return out;
}

std::vector<float> resample(std::span<const float> signal, double in_rate, double out_rate) {
  if (!(in_rate > 0.0) || !(out_rate > 0.0)) throw Error("resample rates must be positive");
  const double ratio = out_rate / in_rate;
  const auto n_in = static_cast<std::ptrdiff_t>(signal.size());
  const auto n_out = static_cast<std::size_t>(std::ceil(static_cast<double>(n_in) * ratio));
  // Low-pass at the lower of the two Nyquist rates; Hann-windowed sinc with
  // 32 zero crossings per side.
  const double cutoff = std::min(1.0, ratio);
  const double half_width = 32.0 / cutoff;
  std::vector<float> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) / ratio;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
    double acc = 0.0;
    for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(lo, 0); k <= std::min(hi, n_in - 1); ++k) {
      const double x = t - static_cast<double>(k);
      const double w = 0.5 + 0.5 * std::cos(kPi * x / half_width);
      acc += signal[static_cast<std::size_t>(k)] * cutoff * sinc(cutoff * x) * w;
    }
    out[j] = static_cast<float>(acc);
  }
  return out;
}

AudioClip pitch_shift(const AudioClip& clip, double semitones, int n_fft, int hop) {
  if (std::abs(semitones) > 12.0) throw Error("pitch shift is limited to +-12 semitones");
  AudioClip out = clip;
  if (semitones == 0.0) return out;
  const double rate = std::pow(2.0, -semitones / 12.0);
  const auto stretched = phase_vocoder_stretch(clip.samples, rate, n_fft, hop);
  auto shifted = resample(stretched, clip.sample_rate / rate, clip.sample_rate);
  shifted.resize(clip.samples.size(), 0.0f);
  out.samples = std::move(shifted);
  return out;
}

void mask_rows(Spectrogram& spec, int start, int width, float value) {
  for (int m = std::max(0, start); m < std::min(spec.n_mels, start + width); ++m) {
    for (int t = 0; t < spec.n_frames; ++t) spec.at(m, t) = value;
  }
}

void mask_frames(Spectrogram& spec, int start, int width, float value) {
  for (int m = 0; m < spec.n_mels; ++m) {
    for (int t = std::max(0, start); t < std::min(spec.n_frames, start + width); ++t) {
      spec.at(m, t) = value;
    }
  }
}

Spectrogram time_warp(const Spectrogram& spec, int anchor, int displacement) {
  const int last = spec.n_frames - 1;
  const int target = anchor + displacement;
  if (anchor <= 0 || anchor >= last || target <= 0 || target >= last) {
    throw Error("time warp anchor/target must lie strictly inside the frame range");
  }
  Spectrogram out = spec;
  for (int j = 0; j <= last; ++j) {
    const double src = j <= target
                           ? static_cast<double>(j) * anchor / target
                           : anchor + static_cast<double>(j - target) * (last - anchor) / (last - target);
    const int i0 = std::clamp(static_cast<int>(std::floor(src)), 0, last);
    const int i1 = std::min(i0 + 1, last);
    const double a = src - i0;
    for (int m = 0; m < spec.n_mels; ++m) {
      out.at(m, j) = static_cast<float>((1.0 - a) * spec.at(m, i0) + a * spec.at(m, i1));
    }
  }
  return out;
}

Spectrogram spec_augment(const Spectrogram& spec, const SpecAugmentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Spectrogram out = spec;
  const int w = cfg.time_warp_max;
  if (w > 0 && spec.n_frames >= 2 * w + 4) {
    const int anchor = static_cast<int>(rng.between(w + 1, spec.n_frames - 2 - w));
    const int displacement = static_cast<int>(rng.between(-w, w));
    if (displacement != 0) out = time_warp(out, anchor, displacement);
  }
  for (int i = 0; i < cfg.n_freq_masks; ++i) {
    const int f = static_cast<int>(rng.between(0, std::min(cfg.freq_mask_max, spec.n_mels)));
    const int f0 = static_cast<int>(rng.between(0, spec.n_mels - f));
    mask_rows(out, f0, f, cfg.mask_value);
  }
  for (int i = 0; i < cfg.n_time_masks; ++i) {
    const int t = static_cast<int>(rng.between(0, std::min(cfg.time_mask_max, spec.n_frames)));
    const int t0 = static_cast<int>(rng.between(0, spec.n_frames - t));
    mask_frames(out, t0, t, cfg.mask_value);
  }
  return out;
}

AugmentedCorpus augment_corpus(std::span<const AudioClip> clips,
                               std::span<const Spectrogram> corpus, ClassicStrategy strategy,
                               const ClassicAugmentConfig& cfg, const LogMelExtractor& extractor,
                               const NormStats& norm, std::uint64_t seed) {
  AugmentedCorpus result;
  result.records.assign(corpus.begin(), corpus.end());
  result.n_original = corpus.size();
  result.records.reserve(2 * corpus.size());
  const std::string name(strategy_name(strategy));

  auto tag = [&](Spectrogram s, std::size_t source, std::uint64_t sample_seed) {
    s.provenance = {name, sample_seed, static_cast<std::int64_t>(source)};
    result.records.push_back(std::move(s));
  };

  if (strategy == ClassicStrategy::kSpecAugment) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& src = corpus[i];
      if (!src.normalized) throw Error("SpecAugment expects normalized spectrograms");
      const auto s = derive_seed(seed, src.clip_id, src.window_index);
      Spectrogram aug = spec_augment(src, cfg.specaug, s);
      aug.clip_id = src.clip_id;
      aug.window_index = src.window_index;
      aug.label = src.label;
      tag(std::move(aug), i, s);
    }
    return result;
  }

  std::map<std::string, const AudioClip*> by_id;
  for (const auto& c : clips) by_id[c.clip_id] = &c;

  // Records of each clip, in corpus order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> records_of;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].normalized) throw Error("augment_corpus expects normalized spectrograms");
    auto& list = records_of[corpus[i].clip_id];
    if (list.empty()) order.push_back(corpus[i].clip_id);
    list.push_back(i);
  }

  const int window_len = extractor.config().window_len;
  for (const auto& clip_id : order) {
    auto it = by_id.find(clip_id);
    if (it == by_id.end()) throw Error("augment_corpus: no waveform for clip '" + clip_id + "'");
    const AudioClip& clip = *it->second;
    const std::uint64_t clip_seed = derive_seed(seed, clip_id, -1);
    SpectrogramCorpus windows;
    try {
      AudioClip aug;
      switch (strategy) {
        case ClassicStrategy::kNoise:
          aug = add_noise(clip, cfg.noise_mu, cfg.noise_sigma, clip_seed);
          break;
        case ClassicStrategy::kPitch:
          aug = pitch_shift(clip, cfg.pitch_semitones, cfg.vocoder_n_fft, cfg.vocoder_hop);
          break;
        case ClassicStrategy::kStretch:
          aug = time_stretch(clip, cfg.stretch_factor, cfg.vocoder_n_fft, cfg.vocoder_hop);
          break;
        case ClassicStrategy::kSpecAugment:
          break;
      }
      // A clip stretched below one window is zero-padded to a single window.
      if (aug.samples.size() < static_cast<std::size_t>(window_len)) {
        aug.samples.resize(static_cast<std::size_t>(window_len), 0.0f);
      }
      for (float v : aug.samples) {
        if (!std::isfinite(v)) throw Error("non-finite sample after " + name);
      }
      windows = extractor.clip_spectrograms(aug);
    } catch (const Error& e) {
      throw Error("augment_corpus(" + name + ") failed for clip '" + clip_id + "': " + e.what());
    }

    const auto& sources = records_of[clip_id];
    const std::size_t n_aug = windows.size();
    std::vector<std::size_t> pick(sources.size());
    Rng rng(clip_seed);
    if (n_aug == sources.size()) {
      for (std::size_t k = 0; k < pick.size(); ++k) pick[k] = k;
    } else if (n_aug > sources.size()) {
      std::vector<std::size_t> idx(n_aug);
      for (std::size_t k = 0; k < n_aug; ++k) idx[k] = k;
      rng.shuffle(std::span<std::size_t>(idx));
      idx.resize(sources.size());
      std::sort(idx.begin(), idx.end());
      pick = idx;
    } else {
      for (auto& p : pick) p = rng.below(n_aug);
    }
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const auto& src = corpus[sources[k]];
      Spectrogram aug = apply_norm(windows[pick[k]], norm);
      aug.label = src.label;
      aug.clip_id = src.clip_id;
      aug.window_index = src.window_index;
      tag(std::move(aug), sources[k], clip_seed);
    }
  }
  return result;
}

}  // namespace clinaug
