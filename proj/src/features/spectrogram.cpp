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

#include "clinaug/spectrogram.hpp"

#include "clinaug/errors.hpp"

#include <cmath>

namespace clinaug {

bool Spectrogram::all_finite() const {
  for (float v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

NormStats fit_norm(std::span<const Spectrogram> corpus) {
  if (corpus.empty()) throw Error("cannot fit normalization on an empty corpus");
  // Two passes in double precision; corpora hold ~1e7 entries.
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : corpus) {
    for (float v : s.values) sum += v;
    count += s.values.size();
  }
  const double mu = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& s : corpus) {
    for (float v : s.values) sq += (v - mu) * (v - mu);
  }
  const double sigma = std::sqrt(sq / static_cast<double>(count));
  if (!(sigma > 0.0)) throw Error("normalization sigma is zero (constant corpus)");
  return {mu, sigma};
}

Spectrogram apply_norm(const Spectrogram& spec, const NormStats& stats) {
  if (spec.normalized) throw Error("spectrogram '" + spec.clip_id + "' is already normalized");
  Spectrogram out = spec;
  for (float& v : out.values) v = static_cast<float>((v - stats.mu) / stats.sigma);
  out.normalized = true;
  return out;
}

Spectrogram invert_norm(const Spectrogram& spec, const NormStats& stats) {
  if (!spec.normalized) throw Error("spectrogram '" + spec.clip_id + "' is not normalized");
  Spectrogram out = spec;
  for (float& v : out.values) v = static_cast<float>(v * stats.sigma + stats.mu);
  out.normalized = false;
  return out;
}

SpectrogramCorpus apply_norm(std::span<const Spectrogram> corpus, const NormStats& stats) {
  SpectrogramCorpus out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(apply_norm(s, stats));
  return out;
}

std::array<int, kNumClasses> class_counts(std::span<const Spectrogram> corpus) {
  std::array<int, kNumClasses> counts{};
  for (const auto& s : corpus) ++counts[class_id(s.label)];
  return counts;
}

}  // namespace clinaug
