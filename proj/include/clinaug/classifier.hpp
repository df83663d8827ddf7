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

#include "clinaug/feature_extractor.hpp"
#include "clinaug/resnet.hpp"
#include "clinaug/spectrogram.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace clinaug {

struct ClassifierConfig {
  int epochs = 20;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int batch_size = 32;
  std::uint64_t seed = 0;
  // Channels of the first stage; 64 is the standard ResNet-18.
  int base_width = 64;
  int n_classes = kNumClasses;

  void validate() const;
};

nlohmann::json to_json(const ClassifierConfig& cfg);
ClassifierConfig classifier_config_from_json(const nlohmann::json& doc);

// A trained ResNet-18. Doubles as the FID feature extractor.
class Classifier : public FeatureExtractor {
 public:
  Classifier(const ClassifierConfig& cfg, int n_mels = 64, int n_frames = 64);

  ResNet18& net() { return net_; }
  const ClassifierConfig& config() const { return cfg_; }

  std::vector<int> predict(std::span<const Spectrogram> specs, int batch_size = 256);

  torch::Tensor extract(const torch::Tensor& batch) override;
  std::int64_t feature_dim() const override { return net_->feature_dim(); }
  int input_mels() const override { return n_mels_; }
  int input_frames() const override { return n_frames_; }

  void save(const std::filesystem::path& path);
  void load(const std::filesystem::path& path);

 private:
  ClassifierConfig cfg_;
  int n_mels_;
  int n_frames_;
  ResNet18 net_{nullptr};
};

struct ClassifierTrainLog {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
};

struct TrainedClassifier {
  std::unique_ptr<Classifier> model;
  ClassifierTrainLog log;
};

// Adam + categorical cross-entropy on normalized spectrograms. Every class
// must be present. Deterministic for a fixed seed.
TrainedClassifier train_classifier(std::span<const Spectrogram> corpus, const ClassifierConfig& cfg,
                                   const std::function<void(int, double, double)>& on_epoch = {});

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

}  // namespace clinaug
