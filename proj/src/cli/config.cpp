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

#include "clinaug/cli.hpp"

#include "clinaug/errors.hpp"
#include "clinaug/rng.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace clinaug::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& require_object(const json& doc, const std::string& field) {
  if (!doc.is_object()) throw ConfigError(field + ": expected an object");
  return doc;
}

void reject_unknown(const json& doc, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key + ": unknown field");
  }
}

template <typename T>
T get(const json& doc, const std::string& key, const std::string& field) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field + ": expected " + (std::is_same_v<T, std::string> ? "a string"
                                               : std::is_same_v<T, bool>      ? "a boolean"
                                                                              : "a number"));
  }
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

json RunConfig::to_json() const {
  json strategies_json = json::array();
  for (Strategy s : strategies) strategies_json.push_back(std::string(strategy_name(s)));
  return {
      {"paths",
       {{"data_root", data_root.string()},
        {"labels", labels_file.string()},
        {"work_dir", work_dir.string()}}},
      {"load",
       {{"downmix", load.downmix},
        {"expected_sample_rate", load.expected_sample_rate},
        {"min_duration", load.min_duration},
        {"max_duration", load.max_duration}}},
      {"mel", clinaug::to_json(mel)},
      {"classic", clinaug::to_json(classic)},
      {"gan", clinaug::to_json(gan)},
      {"classifier", clinaug::to_json(classifier)},
      {"griffin_lim", clinaug::to_json(griffin_lim)},
      {"folds", {{"k", folds}, {"seed", fold_seed}}},
      {"seed", seed},
      {"global_norm", global_norm},
      {"strategies", strategies_json},
  };
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  require_object(doc, "config");
  reject_unknown(doc, "", {"paths", "load", "mel", "classic", "gan", "classifier", "griffin_lim",
                           "folds", "seed", "global_norm", "strategies"});
  RunConfig cfg;

  if (!doc.contains("paths")) throw ConfigError("paths: missing field");
  const json& paths = require_object(doc.at("paths"), "paths");
  reject_unknown(paths, "paths.", {"data_root", "labels", "work_dir"});
  if (!paths.contains("data_root")) throw ConfigError("paths.data_root: missing field");
  if (!paths.contains("work_dir")) throw ConfigError("paths.work_dir: missing field");
  cfg.data_root = resolve(get<std::string>(paths, "data_root", "paths.data_root"), base_dir);
  cfg.work_dir = resolve(get<std::string>(paths, "work_dir", "paths.work_dir"), base_dir);
  cfg.labels_file = paths.contains("labels")
                        ? resolve(get<std::string>(paths, "labels", "paths.labels"), base_dir)
                        : cfg.data_root / "labels.csv";

  if (doc.contains("load")) {
    const json& load = require_object(doc.at("load"), "load");
    reject_unknown(load, "load.", {"downmix", "expected_sample_rate", "min_duration", "max_duration"});
    if (load.contains("downmix")) cfg.load.downmix = get<bool>(load, "downmix", "load.downmix");
    if (load.contains("expected_sample_rate")) {
      cfg.load.expected_sample_rate =
          get<int>(load, "expected_sample_rate", "load.expected_sample_rate");
    }
    if (load.contains("min_duration")) {
      cfg.load.min_duration = get<double>(load, "min_duration", "load.min_duration");
    }
    if (load.contains("max_duration")) {
      cfg.load.max_duration = get<double>(load, "max_duration", "load.max_duration");
    }
    if (cfg.load.min_duration < 0.0) throw ConfigError("load.min_duration: must be >= 0");
    if (cfg.load.max_duration < 0.0) throw ConfigError("load.max_duration: must be >= 0");
  }

  if (doc.contains("mel")) cfg.mel = mel_config_from_json(doc.at("mel"));
  if (doc.contains("classic")) cfg.classic = classic_augment_config_from_json(doc.at("classic"));
  if (doc.contains("gan")) cfg.gan = gan_config_from_json(doc.at("gan"));
  if (doc.contains("classifier")) cfg.classifier = classifier_config_from_json(doc.at("classifier"));
  if (doc.contains("griffin_lim")) cfg.griffin_lim = griffin_lim_config_from_json(doc.at("griffin_lim"));
  cfg.mel.validate();
  cfg.classic.validate();
  cfg.gan.validate();
  cfg.classifier.validate();
  cfg.griffin_lim.validate();

  if (doc.contains("folds")) {
    const json& folds = require_object(doc.at("folds"), "folds");
    reject_unknown(folds, "folds.", {"k", "seed"});
    if (folds.contains("k")) cfg.folds = get<int>(folds, "k", "folds.k");
    if (folds.contains("seed")) cfg.fold_seed = get<std::uint64_t>(folds, "seed", "folds.seed");
  }
  if (cfg.folds < 2) throw ConfigError("folds.k: must be >= 2");
  if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "seed");
  if (doc.contains("global_norm")) cfg.global_norm = get<bool>(doc, "global_norm", "global_norm");

  if (doc.contains("strategies")) {
    const json& list = doc.at("strategies");
    if (!list.is_array() || list.empty()) throw ConfigError("strategies: expected a non-empty list");
    cfg.strategies.clear();
    std::set<Strategy> seen;
    for (const auto& item : list) {
      if (!item.is_string()) throw ConfigError("strategies: expected strategy names");
      const Strategy s = parse_strategy(item.get<std::string>());
      if (!seen.insert(s).second) {
        throw ConfigError("strategies: duplicate '" + item.get<std::string>() + "'");
      }
      cfg.strategies.push_back(s);
    }
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

}  // namespace clinaug::cli
