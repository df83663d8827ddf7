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

#include <torch/torch.h>

#include <cstdint>

namespace clinaug {

class BasicBlockImpl : public torch::nn::Module {
 public:
  BasicBlockImpl(std::int64_t in_channels, std::int64_t out_channels, std::int64_t stride);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr};
  torch::nn::Sequential shortcut_{nullptr};
};
TORCH_MODULE(BasicBlock);

// ResNet-18 for single-channel 64x64 input: 3x3 stride-1 stem without the
// initial max-pool, four stages of two basic blocks (base, 2*base, 4*base,
// 8*base channels), global average pooling and a linear classifier head.
class ResNet18Impl : public torch::nn::Module {
 public:
  ResNet18Impl(std::int64_t n_classes, std::int64_t in_channels = 1, std::int64_t base_width = 64);

  torch::Tensor forward(const torch::Tensor& x);
  // Output of the last convolutional stage, globally average pooled.
  torch::Tensor features(const torch::Tensor& x);

  std::int64_t feature_dim() const { return 8 * base_width_; }

 private:
  std::int64_t base_width_;
  torch::nn::Conv2d stem_{nullptr};
  torch::nn::BatchNorm2d stem_bn_{nullptr};
  torch::nn::Sequential layers_{nullptr};
  torch::nn::Linear fc_{nullptr};
};
TORCH_MODULE(ResNet18);

}  // namespace clinaug
