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

#include "clinaug/class_label.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clinaug {

// Where a spectrogram came from. Real windows have an empty strategy.
struct Provenance {
  std::string strategy;
  std::uint64_t seed = 0;
  // Index of the source record in the corpus it was derived from, -1 if none.
  std::int64_t source_record = -1;
};

// Log-mel matrix stored mel-major: values[mel * n_frames + frame].
struct Spectrogram {
  int n_mels = 64;
  int n_frames = 64;
  std::vector<float> values;
  ClassLabel label = ClassLabel::kAdjustment;
  std::string clip_id;
  int window_index = 0;
  bool normalized = false;
  Provenance provenance;

  Spectrogram() = default;
  Spectrogram(int mels, int frames, float fill = 0.0f)
      : n_mels(mels), n_frames(frames), values(static_cast<std::size_t>(mels) * frames, fill) {}

  float& at(int mel, int frame) { return values[static_cast<std::size_t>(mel) * n_frames + frame]; }
  float at(int mel, int frame) const {
    return values[static_cast<std::size_t>(mel) * n_frames + frame];
  }
  std::size_t size() const { return values.size(); }
  bool all_finite() const;
};

using SpectrogramCorpus = std::vector<Spectrogram>;

// Originals first, then the added records.
struct AugmentedCorpus {
  SpectrogramCorpus records;
  std::size_t n_original = 0;
};

struct NormStats {
  double mu = 0.0;
  double sigma = 1.0;
};

// Scalar mean and population standard deviation over every entry of every
// spectrogram. Throws on an empty corpus or sigma == 0.
NormStats fit_norm(std::span<const Spectrogram> corpus);

// (x - mu) / sigma. Throws if the spectrogram is already normalized.
Spectrogram apply_norm(const Spectrogram& spec, const NormStats& stats);
// x * sigma + mu. Throws if the spectrogram is not normalized.
Spectrogram invert_norm(const Spectrogram& spec, const NormStats& stats);

SpectrogramCorpus apply_norm(std::span<const Spectrogram> corpus, const NormStats& stats);

std::array<int, kNumClasses> class_counts(std::span<const Spectrogram> corpus);

}  // namespace clinaug
