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

#include "clinaug/cv.hpp"

#include "clinaug/errors.hpp"
#include "clinaug/log.hpp"
#include "clinaug/metrics.hpp"
#include "clinaug/rng.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace clinaug {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 7> kStrategyNames{{
    {Strategy::kNone, "none"},
    {Strategy::kNoise, "noise"},
    {Strategy::kPitch, "pitch"},
    {Strategy::kStretch, "stretch"},
    {Strategy::kSpecAugment, "specaugment"},
    {Strategy::kCwganDoubled, "cwgan_doubled"},
    {Strategy::kCwganBalanced, "cwgan_balanced"},
}};

ClassicStrategy classic_of(Strategy s) {
  switch (s) {
    case Strategy::kNoise: return ClassicStrategy::kNoise;
    case Strategy::kPitch: return ClassicStrategy::kPitch;
    case Strategy::kStretch: return ClassicStrategy::kStretch;
    case Strategy::kSpecAugment: return ClassicStrategy::kSpecAugment;
    default: throw Error("not a classic strategy: " + std::string(strategy_name(s)));
  }
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  for (const auto& [s, name] : kStrategyNames) {
    if (s == strategy) return name;
  }
  throw Error("unknown strategy");
}

Strategy parse_strategy(std::string_view name) {
  for (const auto& [s, n] : kStrategyNames) {
    if (n == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

bool is_gan_strategy(Strategy strategy) {
  return strategy == Strategy::kCwganDoubled || strategy == Strategy::kCwganBalanced;
}

void summarize(ExperimentReport& report) {
  const auto& v = report.fold_scores;
  if (v.empty()) {
    report.mean = report.std = 0.0;
    return;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  report.mean = 100.0 * mean;
  report.std = 100.0 * std::sqrt(ss / static_cast<double>(v.size()));
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json doc = {{"strategy", report.strategy},
                        {"fold_scores", report.fold_scores},
                        {"mean", report.mean},
                        {"std", report.std},
                        {"improvement", report.improvement},
                        {"complete", report.complete}};
  if (!report.error.empty()) doc["error"] = report.error;
  return doc;
}

ExperimentReport experiment_report_from_json(const nlohmann::json& doc) {
  ExperimentReport r;
  r.strategy = doc.at("strategy").get<std::string>();
  r.fold_scores = doc.at("fold_scores").get<std::vector<double>>();
  r.mean = doc.at("mean").get<double>();
  r.std = doc.at("std").get<double>();
  r.improvement = doc.at("improvement").get<double>();
  r.complete = doc.value("complete", true);
  r.error = doc.value("error", std::string());
  return r;
}

std::string render_table(std::span<const ExperimentReport> reports) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %-18s %s\n", "Augmentation", "Macro F1", "Relative Improvement");
  out << line;
  for (const auto& r : reports) {
    char score[48];
    std::snprintf(score, sizeof score, "%.2f +- %.2f %%", r.mean, r.std);
    char gain[32];
    std::snprintf(gain, sizeof gain, "%+.2f", r.improvement);
    std::snprintf(line, sizeof line, "%-16s %-18s %s%s\n", r.strategy.c_str(), score, gain,
                  r.complete ? "" : "  (incomplete)");
    out << line;
  }
  return out.str();
}

void check_no_leakage(const std::set<std::string>& train_sources,
                      const std::set<std::string>& test_clips) {
  for (const auto& id : train_sources) {
    if (test_clips.count(id)) throw Error("leakage: test clip '" + id + "' contributes to training");
  }
}

CvResult run_cv(std::span<const ClipData> data, const FoldPlan& plan,
                std::span<const Strategy> strategies, const CvConfig& cfg, const CvHooks& hooks) {
  if (strategies.empty()) throw ConfigError("strategies: at least one strategy is required");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = i + 1; j < strategies.size(); ++j) {
      if (strategies[i] == strategies[j]) {
        throw ConfigError("strategies: duplicate '" + std::string(strategy_name(strategies[i])) + "'");
      }
    }
  }
  if (data.empty()) throw Error("run_cv: no clips");
  cfg.mel.validate();
  cfg.classifier.validate();

  const LogMelExtractor extractor(cfg.mel);
  std::vector<AudioClip> clips;
  clips.reserve(data.size());
  for (const auto& d : data) {
    plan.fold_of(d.clip.clip_id);  // throws for clips outside the plan
    clips.push_back(d.clip);
  }

  std::optional<NormStats> global;
  if (cfg.global_norm) {
    SpectrogramCorpus all;
    for (const auto& d : data) all.insert(all.end(), d.windows.begin(), d.windows.end());
    global = fit_norm(all);
  }

  CvResult result;
  result.reports.resize(strategies.size());
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    result.reports[i].strategy = std::string(strategy_name(strategies[i]));
  }

  bool need_gan = false;
  for (Strategy s : strategies) need_gan = need_gan || is_gan_strategy(s);

  for (int fold = 0; fold < plan.k; ++fold) {
    SpectrogramCorpus train_raw, test_raw;
    std::set<std::string> test_clips;
    for (const auto& d : data) {
      const bool is_test = plan.fold_of(d.clip.clip_id) == fold;
      auto& dst = is_test ? test_raw : train_raw;
      dst.insert(dst.end(), d.windows.begin(), d.windows.end());
      if (is_test) test_clips.insert(d.clip.clip_id);
    }
    if (test_raw.empty()) throw Error("fold " + std::to_string(fold) + " has no test spectrograms");
    const NormStats norm = global ? *global : fit_norm(train_raw);
    const auto train = apply_norm(train_raw, norm);
    const auto test = apply_norm(test_raw, norm);
    std::vector<int> y_test;
    y_test.reserve(test.size());
    for (const auto& s : test) y_test.push_back(class_id(s.label));

    ClassifierConfig ccfg = cfg.classifier;
    ccfg.seed = derive_seed(cfg.classifier.seed, "classifier", fold);

    // The unaugmented classifier doubles as the FID feature extractor.
    std::unique_ptr<Classifier> baseline;
    auto baseline_model = [&]() -> Classifier& {
      if (!baseline) baseline = train_classifier(train, ccfg).model;
      return *baseline;
    };
    std::optional<GanCheckpoint> gan;
    std::optional<double> best_fid;
    std::string gan_error;

    for (std::size_t si = 0; si < strategies.size(); ++si) {
      const Strategy strategy = strategies[si];
      auto& report = result.reports[si];
      if (!report.complete) continue;
      try {
        std::set<std::string> sources;
        for (const auto& s : train) sources.insert(s.clip_id);
        Classifier* model = nullptr;
        std::unique_ptr<Classifier> owned;
        std::size_t n_train = train.size();

        if (strategy == Strategy::kNone) {
          model = &baseline_model();
        } else {
          AugmentedCorpus augmented;
          if (is_gan_strategy(strategy)) {
            if (!gan_error.empty()) throw Error(gan_error);
            if (!gan) {
              try {
                GanConfig gcfg = cfg.gan;
                gcfg.seed = derive_seed(cfg.gan.seed, "gan", fold);
                FidReference ref(baseline_model(), train);
                gan = hooks.gan_provider ? hooks.gan_provider(fold, train, gcfg, &ref)
                                         : clinaug::train(train, gcfg, &ref).best;
                for (const auto& r : gan->fid_history) {
                  if (!best_fid || r.fid < *best_fid) best_fid = r.fid;
                }
              } catch (const std::exception& e) {
                gan_error = std::string("GAN training failed: ") + e.what();
                throw Error(gan_error);
              }
            }
            augmented = synthesize_augmentation(
                *gan, train,
                strategy == Strategy::kCwganDoubled ? GanStrategy::kDoubled : GanStrategy::kBalanced,
                derive_seed(cfg.seed, strategy_name(strategy), fold));
            // The generator's sources are the fold-train clips, already in `sources`.
          } else {
            augmented = augment_corpus(clips, train, classic_of(strategy), cfg.classic, extractor, norm,
                                       derive_seed(cfg.seed, strategy_name(strategy), fold));
            for (const auto& s : augmented.records) sources.insert(s.clip_id);
          }
          n_train = augmented.records.size();
          owned = train_classifier(augmented.records, ccfg).model;
          model = owned.get();
        }
        check_no_leakage(sources, test_clips);

        const auto y_pred = model->predict(test);
        const double f1 = macro_f1(y_test, y_pred, kNumClasses);
        report.fold_scores.push_back(f1);

        FoldRecord record;
        record.fold = fold;
        record.strategy = report.strategy;
        record.macro_f1 = f1;
        record.n_train = n_train;
        record.n_test = test.size();
        record.norm = norm;
        if (is_gan_strategy(strategy)) record.best_fid = best_fid;
        result.folds.push_back(record);
        log::info("cv_fold", {{"fold", fold},
                              {"strategy", report.strategy},
                              {"macro_f1", f1},
                              {"n_train", n_train},
                              {"n_test", test.size()}});
        if (hooks.on_fold) hooks.on_fold(record);
      } catch (const std::exception& e) {
        report.complete = false;
        report.error = "fold " + std::to_string(fold) + ": " + e.what();
        log::warn("cv_strategy_failed", {{"strategy", report.strategy}, {"error", report.error}});
      }
    }
  }

  for (auto& r : result.reports) summarize(r);
  const ExperimentReport* base = &result.reports.front();
  for (const auto& r : result.reports) {
    if (r.strategy == "none") base = &r;
  }
  const double base_mean = base->mean;
  for (auto& r : result.reports) r.improvement = r.mean - base_mean;
  return result;
}

}  // namespace clinaug
