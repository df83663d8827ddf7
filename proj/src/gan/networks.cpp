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

#include "clinaug/gan.hpp"

#include "clinaug/config_fields.hpp"
#include "clinaug/errors.hpp"

#include <cmath>
#include <string>

namespace clinaug {

namespace nn = torch::nn;

namespace {

std::int64_t scaled(std::int64_t channels, double width) {
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(channels) * width));
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("gan." + field + ": " + why);
}

}  // namespace

void GanConfig::validate() const {
  require(latent_dim > 0, "latent_dim", "must be positive");
  require(n_classes == kNumClasses, "n_classes", "must be 6");
  require(embed_dim > 0, "embed_dim", "must be positive");
  require(gp_weight >= 0.0, "gp_weight", "must be >= 0");
  require(n_critic >= 1, "n_critic", "must be >= 1");
  require(batch_size > 0, "batch_size", "must be positive");
  require(lr > 0.0, "lr", "must be positive");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1", "must be in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2", "must be in [0, 1)");
  require(max_epochs > 0, "max_epochs", "must be positive");
  require(fid_interval > 0, "fid_interval", "must be positive");
  require(fid_samples >= 2, "fid_samples", "must be >= 2");
  require(width > 0.0, "width", "must be positive");
  require(divergence_limit > 0.0, "divergence_limit", "must be positive");
  require(divergence_patience > 0, "divergence_patience", "must be positive");
}

nlohmann::json to_json(const GanConfig& c) {
  return {{"latent_dim", c.latent_dim},
          {"n_classes", c.n_classes},
          {"embed_dim", c.embed_dim},
          {"gp_weight", c.gp_weight},
          {"n_critic", c.n_critic},
          {"batch_size", c.batch_size},
          {"lr", c.lr},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"max_epochs", c.max_epochs},
          {"fid_interval", c.fid_interval},
          {"fid_samples", c.fid_samples},
          {"seed", c.seed},
          {"width", c.width},
          {"leaky_slope", c.leaky_slope},
          {"divergence_limit", c.divergence_limit},
          {"divergence_patience", c.divergence_patience}};
}

GanConfig gan_config_from_json(const nlohmann::json& doc) {
  GanConfig c;
  ConfigFields f(doc, "gan");
  f.read("latent_dim", c.latent_dim).read("n_classes", c.n_classes).read("embed_dim", c.embed_dim);
  f.read("gp_weight", c.gp_weight).read("n_critic", c.n_critic).read("batch_size", c.batch_size);
  f.read("lr", c.lr).read("beta1", c.beta1).read("beta2", c.beta2);
  f.read("max_epochs", c.max_epochs).read("fid_interval", c.fid_interval);
  f.read("fid_samples", c.fid_samples).read("seed", c.seed).read("width", c.width);
  f.read("leaky_slope", c.leaky_slope).read("divergence_limit", c.divergence_limit);
  f.read("divergence_patience", c.divergence_patience);
  f.finish();
  c.validate();
  return c;
}

GeneratorImpl::GeneratorImpl(const GanConfig& cfg)
    : seed_channels_(scaled(256, cfg.width)), slope_(cfg.leaky_slope) {
  embed_ = register_module("embed", nn::Embedding(cfg.n_classes, cfg.embed_dim));
  mapping_ = register_module(
      "mapping", nn::Linear(nn::LinearOptions(cfg.latent_dim + cfg.embed_dim, 16 * seed_channels_)
                                .bias(false)));
  stages_ = register_module("stages", nn::ModuleList());
  const std::int64_t widths[] = {seed_channels_, scaled(256, cfg.width), scaled(128, cfg.width),
                                 scaled(64, cfg.width), scaled(32, cfg.width)};
  for (int i = 0; i < 4; ++i) {
    stages_->push_back(nn::Conv2d(
        nn::Conv2dOptions(widths[i], widths[i + 1], 3).padding(1).bias(false)));
  }
  output_ = register_module(
      "output", nn::Conv2d(nn::Conv2dOptions(widths[4], 1, 3).padding(1).bias(false)));
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& z, const torch::Tensor& labels) {
  auto h = mapping_->forward(torch::cat({z, embed_->forward(labels)}, 1));
  h = h.view({-1, seed_channels_, 4, 4});
  const auto lrelu = nn::functional::LeakyReLUFuncOptions().negative_slope(slope_);
  for (const auto& stage : *stages_) {
    h = torch::upsample_nearest2d(h, std::vector<std::int64_t>{2 * h.size(2), 2 * h.size(3)});
    h = nn::functional::leaky_relu(stage->as<nn::Conv2d>()->forward(h), lrelu);
  }
  // Linear output: spectrograms are z-scored, not bounded.
  return output_->forward(h);
}

CriticImpl::CriticImpl(const GanConfig& cfg) : n_classes_(cfg.n_classes), slope_(cfg.leaky_slope) {
  stages_ = register_module("stages", nn::ModuleList());
  const std::int64_t widths[] = {1 + cfg.n_classes, scaled(64, cfg.width), scaled(128, cfg.width),
                                 scaled(256, cfg.width), scaled(512, cfg.width)};
  for (int i = 0; i < 4; ++i) {
    stages_->push_back(
        nn::Conv2d(nn::Conv2dOptions(widths[i], widths[i + 1], 5).stride(2).padding(2)));
  }
  output_ = register_module("output", nn::Linear(16 * widths[4], 1));
}

torch::Tensor CriticImpl::forward(const torch::Tensor& x, const torch::Tensor& labels) {
  const auto planes = torch::one_hot(labels, n_classes_)
                          .to(x.dtype())
                          .view({-1, n_classes_, 1, 1})
                          .expand({x.size(0), n_classes_, x.size(2), x.size(3)});
  auto h = torch::cat({x, planes}, 1);
  const auto lrelu = nn::functional::LeakyReLUFuncOptions().negative_slope(slope_);
  for (const auto& stage : *stages_) {
    h = nn::functional::leaky_relu(stage->as<nn::Conv2d>()->forward(h), lrelu);
  }
  return output_->forward(h.flatten(1)).view({-1});
}

std::int64_t count_parameters(torch::nn::Module& module) {
  std::int64_t n = 0;
  for (const auto& p : module.parameters()) n += p.numel();
  return n;
}

}  // namespace clinaug
