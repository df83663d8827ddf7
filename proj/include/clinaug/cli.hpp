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
#include "clinaug/cv.hpp"
#include "clinaug/dataset.hpp"
#include "clinaug/gan.hpp"
#include "clinaug/mel.hpp"
#include "clinaug/vocoder.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace clinaug::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::filesystem::path data_root;
  // Defaults to <data_root>/labels.csv.
  std::filesystem::path labels_file;
  std::filesystem::path work_dir;
  LoadOptions load;
  MelConfig mel;
  ClassicAugmentConfig classic;
  GanConfig gan;
  ClassifierConfig classifier;
  GriffinLimConfig griffin_lim;
  int folds = 5;
  std::uint64_t fold_seed = 0;
  std::uint64_t seed = 0;
  bool global_norm = false;
  std::vector<Strategy> strategies{Strategy::kNone};

  // Canonical JSON form; the hash is taken over this.
  nlohmann::json to_json() const;
  std::string hash() const;
};

// Validates the whole tree before returning; any problem raises ConfigError
// naming the offending field. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Work-dir layout.
struct WorkPaths {
  std::filesystem::path root;

  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path corpus() const { return root / "corpus"; }
  std::filesystem::path folds() const { return root / "folds.json"; }
  std::filesystem::path norm() const { return root / "norm.json"; }
  std::filesystem::path fold_dir(int fold) const { return root / ("fold" + std::to_string(fold)); }
  std::filesystem::path classifier(int fold) const { return fold_dir(fold) / "classifier.pt"; }
  std::filesystem::path gan_best(int fold) const { return fold_dir(fold) / "gan" / "best"; }
  std::filesystem::path gan_last(int fold) const { return fold_dir(fold) / "gan" / "last"; }
  std::filesystem::path fid_log(int fold) const { return fold_dir(fold) / "fid_log.jsonl"; }
  std::filesystem::path augmented(int fold, const std::string& strategy) const {
    return fold_dir(fold) / ("augmented_" + strategy);
  }
  std::filesystem::path report() const { return root / "report.json"; }
  std::filesystem::path report_table() const { return root / "report.txt"; }
  std::filesystem::path provenance(const std::string& command) const {
    return root / "provenance" / (command + ".json");
  }
};

// Each command writes its artifacts below cfg.work_dir and a provenance
// record, and prints a human summary to `out`.
void cmd_prepare(const RunConfig& cfg, std::ostream& out);
void cmd_train_gan(const RunConfig& cfg, int fold, bool resume, std::ostream& out);
void cmd_generate(const RunConfig& cfg, int fold, GanStrategy strategy, std::ostream& out);
// A non-empty `plan_path` replaces the prepared fold plan.
void cmd_evaluate(const RunConfig& cfg, std::ostream& out,
                  const std::filesystem::path& plan_path = {});
void cmd_render(const RunConfig& cfg, int fold, ClassLabel label, int n,
                const std::filesystem::path& out_dir, std::ostream& out);
void cmd_toy_corpus(const std::filesystem::path& out_dir, int n_per_class, std::uint64_t seed,
                    std::ostream& out);

// Parses argv, dispatches and maps failures to exit codes:
// 0 success, 1 runtime failure, 2 configuration or usage error.
int run_cli(int argc, char** argv, std::ostream& out);

}  // namespace clinaug::cli
