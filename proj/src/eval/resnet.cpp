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

#include "clinaug/resnet.hpp"

namespace clinaug {

namespace nn = torch::nn;

namespace {

nn::Conv2d conv3x3(std::int64_t in, std::int64_t out, std::int64_t stride) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, 3).stride(stride).padding(1).bias(false));
}

}  // namespace

BasicBlockImpl::BasicBlockImpl(std::int64_t in_channels, std::int64_t out_channels,
                               std::int64_t stride) {
  conv1_ = register_module("conv1", conv3x3(in_channels, out_channels, stride));
  bn1_ = register_module("bn1", nn::BatchNorm2d(out_channels));
  conv2_ = register_module("conv2", conv3x3(out_channels, out_channels, 1));
  bn2_ = register_module("bn2", nn::BatchNorm2d(out_channels));
  if (stride != 1 || in_channels != out_channels) {
    shortcut_ = register_module(
        "shortcut",
        nn::Sequential(nn::Conv2d(nn::Conv2dOptions(in_channels, out_channels, 1).stride(stride).bias(false)),
                       nn::BatchNorm2d(out_channels)));
  }
}

torch::Tensor BasicBlockImpl::forward(const torch::Tensor& x) {
  auto out = torch::relu(bn1_->forward(conv1_->forward(x)));
  out = bn2_->forward(conv2_->forward(out));
  return torch::relu(out + (shortcut_ ? shortcut_->forward(x) : x));
}

ResNet18Impl::ResNet18Impl(std::int64_t n_classes, std::int64_t in_channels, std::int64_t base_width)
    : base_width_(base_width) {
  // 3x3 stem without max-pool for 64x64 inputs.
  stem_ = register_module("stem", conv3x3(in_channels, base_width, 1));
  stem_bn_ = register_module("stem_bn", nn::BatchNorm2d(base_width));
  nn::Sequential layers;
  std::int64_t in = base_width;
  for (int stage = 0; stage < 4; ++stage) {
    const std::int64_t out = base_width << stage;
    layers->push_back(BasicBlock(in, out, stage == 0 ? 1 : 2));
    layers->push_back(BasicBlock(out, out, 1));
    in = out;
  }
  layers_ = register_module("layers", layers);
  fc_ = register_module("fc", nn::Linear(in, n_classes));
}

torch::Tensor ResNet18Impl::features(const torch::Tensor& x) {
  auto out = torch::relu(stem_bn_->forward(stem_->forward(x)));
  out = layers_->forward(out);
  return out.mean({2, 3});
}

torch::Tensor ResNet18Impl::forward(const torch::Tensor& x) { return fc_->forward(features(x)); }

}  // namespace clinaug
