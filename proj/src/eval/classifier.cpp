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

#include "clinaug/classifier.hpp"

#include "clinaug/config_fields.hpp"
#include "clinaug/errors.hpp"
#include "clinaug/log.hpp"
#include "clinaug/rng.hpp"

#include <cmath>
#include <numeric>

namespace clinaug {

void ClassifierConfig::validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string("classifier.") + field + ": must be positive");
  };
  require(epochs > 0, "epochs");
  require(lr > 0.0, "lr");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2");
  require(batch_size > 0, "batch_size");
  require(base_width > 0, "base_width");
  require(n_classes > 1, "n_classes");
}

nlohmann::json to_json(const ClassifierConfig& cfg) {
  return {{"epochs", cfg.epochs},         {"lr", cfg.lr},
          {"beta1", cfg.beta1},           {"beta2", cfg.beta2},
          {"batch_size", cfg.batch_size}, {"seed", cfg.seed},
          {"base_width", cfg.base_width}, {"n_classes", cfg.n_classes}};
}

ClassifierConfig classifier_config_from_json(const nlohmann::json& doc) {
  ClassifierConfig cfg;
  ConfigFields f(doc, "classifier");
  f.read("epochs", cfg.epochs).read("lr", cfg.lr).read("beta1", cfg.beta1).read("beta2", cfg.beta2);
  f.read("batch_size", cfg.batch_size).read("seed", cfg.seed).read("base_width", cfg.base_width);
  f.read("n_classes", cfg.n_classes);
  f.finish();
  cfg.validate();
  return cfg;
}

Classifier::Classifier(const ClassifierConfig& cfg, int n_mels, int n_frames)
    : cfg_(cfg), n_mels_(n_mels), n_frames_(n_frames) {
  cfg.validate();
  torch::manual_seed(cfg.seed);
  net_ = ResNet18(cfg.n_classes, 1, cfg.base_width);
}

std::vector<int> Classifier::predict(std::span<const Spectrogram> specs, int batch_size) {
  torch::NoGradGuard no_grad;
  net_->eval();
  std::vector<int> out;
  out.reserve(specs.size());
  for (std::size_t start = 0; start < specs.size(); start += static_cast<std::size_t>(batch_size)) {
    const auto n = std::min(specs.size() - start, static_cast<std::size_t>(batch_size));
    const auto logits = net_->forward(to_tensor(specs.subspan(start, n)));
    const auto arg = logits.argmax(1).contiguous();
    const auto* p = arg.data_ptr<std::int64_t>();
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<int>(p[i]));
  }
  return out;
}

torch::Tensor Classifier::extract(const torch::Tensor& batch) {
  torch::NoGradGuard no_grad;
  net_->eval();
  return net_->features(batch);
}

void Classifier::save(const std::filesystem::path& path) { torch::save(net_, path.string()); }

void Classifier::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("classifier weights not found: " + path.string());
  torch::load(net_, path.string());
}

TrainedClassifier train_classifier(std::span<const Spectrogram> corpus, const ClassifierConfig& cfg,
                                   const std::function<void(int, double, double)>& on_epoch) {
  cfg.validate();
  if (corpus.empty()) throw Error("classifier training corpus is empty");
  const auto counts = class_counts(corpus);
  for (int c = 0; c < cfg.n_classes && c < kNumClasses; ++c) {
    if (counts[c] == 0) {
      throw Error(std::string("classifier training corpus lacks class ") +
                  std::string(class_name(class_from_id(c))));
    }
  }

  TrainedClassifier result;
  result.model = std::make_unique<Classifier>(cfg, corpus.front().n_mels, corpus.front().n_frames);
  auto& net = result.model->net();
  torch::optim::Adam optim(net->parameters(), torch::optim::AdamOptions(cfg.lr).betas(
                                                  std::make_tuple(cfg.beta1, cfg.beta2)));
  const auto data = to_tensor(corpus);
  const auto labels = labels_tensor(corpus);
  const auto n = static_cast<std::int64_t>(corpus.size());
  Rng rng(cfg.seed);
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));

  net->train();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::int64_t>(order));
    const auto perm = torch::tensor(order, torch::kInt64);
    double loss_sum = 0.0;
    std::int64_t correct = 0;
    for (std::int64_t start = 0; start < n; start += cfg.batch_size) {
      const auto idx = perm.slice(0, start, std::min(n, start + cfg.batch_size));
      const auto x = data.index_select(0, idx);
      const auto y = labels.index_select(0, idx);
      const auto logits = net->forward(x);
      const auto loss = torch::nn::functional::cross_entropy(logits, y);
      const double value = loss.item<double>();
      if (!std::isfinite(value)) {
        throw Error("classifier loss is not finite at epoch " + std::to_string(epoch));
      }
      optim.zero_grad();
      loss.backward();
      optim.step();
      loss_sum += value * static_cast<double>(idx.size(0));
      correct += logits.argmax(1).eq(y).sum().item<std::int64_t>();
    }
    const double mean_loss = loss_sum / static_cast<double>(n);
    const double acc = static_cast<double>(correct) / static_cast<double>(n);
    result.log.epoch_loss.push_back(mean_loss);
    result.log.epoch_accuracy.push_back(acc);
    log::debug("classifier_epoch", {{"epoch", epoch}, {"loss", mean_loss}, {"accuracy", acc}});
    if (on_epoch) on_epoch(epoch, mean_loss, acc);
  }
  net->eval();
  return result;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty() || y_true.size() != y_pred.size()) {
    throw Error("accuracy: inputs must be non-empty and of equal length");
  }
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hit += y_true[i] == y_pred[i];
  return static_cast<double>(hit) / static_cast<double>(y_true.size());
}

}  // namespace clinaug
