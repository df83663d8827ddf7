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

#include "clinaug/fid.hpp"
#include "clinaug/spectrogram.hpp"

#include <torch/torch.h>

#include <span>

namespace clinaug {

// Maps a batch of spectrograms (N x 1 x H x W) to N x d features in
// inference mode.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual torch::Tensor extract(const torch::Tensor& batch) = 0;
  virtual std::int64_t feature_dim() const = 0;
  virtual int input_mels() const = 0;
  virtual int input_frames() const = 0;
};

// Stacks spectrogram values into an N x 1 x n_mels x n_frames float tensor.
torch::Tensor to_tensor(std::span<const Spectrogram> specs);
torch::Tensor labels_tensor(std::span<const Spectrogram> specs);

// One row per spectrogram. Inputs must be normalized and match the
// extractor's input shape.
Eigen::MatrixXd extract_features(std::span<const Spectrogram> specs, FeatureExtractor& extractor,
                                 int batch_size = 256);

// Real-corpus statistics held fixed while generated sets are scored.
class FidReference {
 public:
  FidReference(FeatureExtractor& extractor, std::span<const Spectrogram> real);

  double score(std::span<const Spectrogram> generated) const;
  const GaussianStats& real_stats() const { return real_stats_; }
  std::int64_t n_real() const { return real_stats_.n; }

 private:
  FeatureExtractor* extractor_;
  GaussianStats real_stats_;
};

}  // namespace clinaug
