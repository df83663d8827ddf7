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

#include "clinaug/dataset.hpp"
#include "clinaug/mel.hpp"
#include "clinaug/spectrogram.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string_view>

namespace clinaug {

struct SpecAugmentConfig {
  int n_freq_masks = 1;
  int freq_mask_max = 10;  // F
  int n_time_masks = 1;
  int time_mask_max = 10;  // T
  int time_warp_max = 5;   // W
  float mask_value = 0.0f;
};

struct ClassicAugmentConfig {
  double noise_mu = 0.0;
  double noise_sigma = 0.01;
  double pitch_semitones = 3.0;
  double stretch_factor = 1.5;
  SpecAugmentConfig specaug;
  // Phase-vocoder analysis used by pitch shift and time stretch.
  int vocoder_n_fft = 2048;
  int vocoder_hop = 512;

  void validate() const;
};

nlohmann::json to_json(const ClassicAugmentConfig& cfg);
ClassicAugmentConfig classic_augment_config_from_json(const nlohmann::json& doc);

enum class ClassicStrategy { kNoise, kPitch, kStretch, kSpecAugment };

std::string_view strategy_name(ClassicStrategy strategy);

AudioClip add_noise(const AudioClip& clip, double mu, double sigma, std::uint64_t seed);

// Phase-vocoder time scaling; factor > 1 shortens the clip. Output length is
// round(len / factor). Throws if the input or output is shorter than n_fft.
std::vector<float> phase_vocoder_stretch(std::span<const float> signal, double factor,
                                         int n_fft, int hop);

AudioClip time_stretch(const AudioClip& clip, double factor, int n_fft = 2048, int hop = 512);

// Band-limited (windowed-sinc) resampling by out_rate / in_rate.
std::vector<float> resample(std::span<const float> signal, double in_rate, double out_rate);

// Stretch by 2^(-semitones/12), then resample back to the original length,
// scaling all frequencies by 2^(semitones/12).
AudioClip pitch_shift(const AudioClip& clip, double semitones, int n_fft = 2048, int hop = 512);

// Sets `width` mel rows (resp. frames) starting at `start` to value.
void mask_rows(Spectrogram& spec, int start, int width, float value);
void mask_frames(Spectrogram& spec, int start, int width, float value);

// Piecewise-linear time warp moving frame `anchor` to anchor + displacement
// while keeping the first and last frames fixed.
Spectrogram time_warp(const Spectrogram& spec, int anchor, int displacement);

// Optional time warp, then frequency and time masks set to mask_value.
Spectrogram spec_augment(const Spectrogram& spec, const SpecAugmentConfig& cfg, std::uint64_t seed);

// Original corpus plus one augmented spectrogram per original, same label.
// Doubles a normalized spectrogram corpus. Waveform strategies transform the
// source clip and re-extract windows through the same extractor, then pair
// every original window with one augmented window of the same clip. Clips
// referenced by the corpus must be present in `clips`.
AugmentedCorpus augment_corpus(std::span<const AudioClip> clips,
                               std::span<const Spectrogram> corpus, ClassicStrategy strategy,
                               const ClassicAugmentConfig& cfg, const LogMelExtractor& extractor,
                               const NormStats& norm, std::uint64_t seed);

}  // namespace clinaug
