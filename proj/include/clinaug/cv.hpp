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

#include "clinaug/classic_augment.hpp"
#include "clinaug/classifier.hpp"
#include "clinaug/dataset.hpp"
#include "clinaug/gan.hpp"
#include "clinaug/mel.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clinaug {

enum class Strategy {
  kNone,
  kNoise,
  kPitch,
  kStretch,
  kSpecAugment,
  kCwganDoubled,
  kCwganBalanced,
};

std::string_view strategy_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);
bool is_gan_strategy(Strategy strategy);

struct ExperimentReport {
  std::string strategy;
  std::vector<double> fold_scores;  // macro F1 in [0, 1]
  double mean = 0.0;                // percent
  double std = 0.0;                 // percent, population (ddof = 0)
  double improvement = 0.0;         // mean - baseline mean, percentage points
  bool complete = true;
  std::string error;
};

// Fills mean and std (in percent) from fold_scores.
void summarize(ExperimentReport& report);

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport experiment_report_from_json(const nlohmann::json& doc);

// Text table with strategy, mean +- std and improvement columns.
std::string render_table(std::span<const ExperimentReport> reports);

// Raises clinaug::Error if any clip contributing to training (directly or as
// an augmentation / generator source) is a test clip.
void check_no_leakage(const std::set<std::string>& train_sources,
                      const std::set<std::string>& test_clips);

// One labeled clip together with its unnormalized window spectrograms.
struct ClipData {
  AudioClip clip;
  SpectrogramCorpus windows;
};

struct CvConfig {
  MelConfig mel;
  ClassicAugmentConfig classic;
  GanConfig gan;
  ClassifierConfig classifier;
  // Fit normalization on the whole corpus instead of fold-train only.
  bool global_norm = false;
  std::uint64_t seed = 0;
};

struct FoldRecord {
  int fold = 0;
  std::string strategy;
  double macro_f1 = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  NormStats norm;
  std::optional<double> best_fid;
};

// Hooks the CLI uses to persist or reuse per-fold artifacts.
struct CvHooks {
  // Returns a trained cWGAN-GP for the fold; defaults to training one.
  std::function<GanCheckpoint(int fold, const SpectrogramCorpus& train, const GanConfig& cfg,
                              const FidReference* fid_ref)>
      gan_provider;
  std::function<void(const FoldRecord&)> on_fold;
};

struct CvResult {
  std::vector<ExperimentReport> reports;
  std::vector<FoldRecord> folds;
};

// Cross-validated comparison of augmentation strategies. Per fold: fit
// normalization on fold-train, build each strategy's training corpus from
// fold-train only (GAN strategies train a generator on fold-train), train a
// classifier and score macro F1 on real fold-test spectrograms. The first
// report is the baseline for `improvement` ("none" when requested).
CvResult run_cv(std::span<const ClipData> data, const FoldPlan& plan,
                std::span<const Strategy> strategies, const CvConfig& cfg,
                const CvHooks& hooks = {});

}  // namespace clinaug
