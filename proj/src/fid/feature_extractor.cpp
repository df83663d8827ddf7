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

#include "clinaug/feature_extractor.hpp"

#include "clinaug/errors.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace clinaug {

torch::Tensor to_tensor(std::span<const Spectrogram> specs) {
  if (specs.empty()) return torch::empty({0, 1, 0, 0});
  const int h = specs.front().n_mels;
  const int w = specs.front().n_frames;
  auto out = torch::empty({static_cast<std::int64_t>(specs.size()), 1, h, w}, torch::kFloat32);
  float* dst = out.data_ptr<float>();
  const std::size_t n = static_cast<std::size_t>(h) * w;
  for (const auto& s : specs) {
    if (s.n_mels != h || s.n_frames != w || s.values.size() != n) {
      throw Error("spectrogram batch has mixed shapes");
    }
    std::memcpy(dst, s.values.data(), n * sizeof(float));
    dst += n;
  }
  return out;
}

torch::Tensor labels_tensor(std::span<const Spectrogram> specs) {
  auto out = torch::empty({static_cast<std::int64_t>(specs.size())}, torch::kInt64);
  auto* dst = out.data_ptr<std::int64_t>();
  for (const auto& s : specs) *dst++ = class_id(s.label);
  return out;
}

Eigen::MatrixXd extract_features(std::span<const Spectrogram> specs, FeatureExtractor& extractor,
                                 int batch_size) {
  for (const auto& s : specs) {
    if (s.n_mels != extractor.input_mels() || s.n_frames != extractor.input_frames()) {
      throw Error("feature extractor expects " + std::to_string(extractor.input_mels()) + "x" +
                  std::to_string(extractor.input_frames()) + " input, got " +
                  std::to_string(s.n_mels) + "x" + std::to_string(s.n_frames));
    }
    if (!s.normalized) throw Error("feature extraction expects normalized spectrograms");
  }
  const auto d = extractor.feature_dim();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(specs.size()), d);
  torch::NoGradGuard no_grad;
  for (std::size_t start = 0; start < specs.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t count = std::min<std::size_t>(batch_size, specs.size() - start);
    const auto feats = extractor.extract(to_tensor(specs.subspan(start, count)))
                           .to(torch::kFloat64)
                           .contiguous();
    if (feats.dim() != 2 || feats.size(1) != d) throw Error("feature extractor returned a bad shape");
    const double* src = feats.data_ptr<double>();
    for (std::size_t i = 0; i < count; ++i) {
      for (std::int64_t j = 0; j < d; ++j) {
        out(static_cast<Eigen::Index>(start + i), j) = src[i * d + j];
      }
    }
  }
  return out;
}

FidReference::FidReference(FeatureExtractor& extractor, std::span<const Spectrogram> real)
    : extractor_(&extractor), real_stats_(gaussian_stats(extract_features(real, extractor))) {}

double FidReference::score(std::span<const Spectrogram> generated) const {
  return frechet_distance(real_stats_, gaussian_stats(extract_features(generated, *extractor_)));
}

}  // namespace clinaug
