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

#include "clinaug/corpus_io.hpp"
#include "clinaug/errors.hpp"
#include "clinaug/log.hpp"
#include "clinaug/render.hpp"
#include "clinaug/rng.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fftw3.h>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace clinaug::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path, const std::string& producer) {
  std::ifstream in(path);
  if (!in) {
    throw Error("missing upstream artifact '" + path.string() + "'; run `clinaug " + producer +
                "` first");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("corrupt artifact '" + path.string() + "': " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string fold_label(int fold) { return fold < 0 ? "all" : std::to_string(fold); }

std::uint64_t gan_seed(const RunConfig& cfg, int fold) { return derive_seed(cfg.gan.seed, "gan", fold); }
std::uint64_t classifier_seed(const RunConfig& cfg, int fold) {
  return derive_seed(cfg.classifier.seed, "classifier", fold);
}

void write_provenance(const RunConfig& cfg, const std::string& command, const json& details) {
  json doc = {
      {"command", command},
      {"config_hash", cfg.hash()},
      {"config", cfg.to_json()},
      {"seeds",
       {{"seed", cfg.seed},
        {"fold_seed", cfg.fold_seed},
        {"gan", cfg.gan.seed},
        {"classifier", cfg.classifier.seed},
        {"griffin_lim", cfg.griffin_lim.seed}}},
      {"versions",
       {{"clinaug", kVersion},
        {"torch", TORCH_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"fftw", std::string(fftw_version)}}},
      {"details", details},
  };
  write_json(WorkPaths{cfg.work_dir}.provenance(command), doc);
}

std::string counts_line(const std::array<int, kNumClasses>& counts) {
  std::ostringstream out;
  for (ClassLabel c : kAllClasses) {
    out << (c == ClassLabel::kAdjustment ? "" : ", ") << class_name(c) << "=" << counts[class_id(c)];
  }
  return out.str();
}

json counts_json(const std::array<int, kNumClasses>& counts) {
  json doc = json::object();
  for (ClassLabel c : kAllClasses) doc[std::string(class_name(c))] = counts[class_id(c)];
  return doc;
}

// Everything `prepare` leaves on disk.
struct Prepared {
  DatasetManifest manifest;
  SpectrogramCorpus windows;
  FoldPlan plan;
  NormStats global;
  std::vector<NormStats> fold_norms;
};

Prepared load_prepared(const RunConfig& cfg) {
  const WorkPaths wp{cfg.work_dir};
  Prepared p;
  p.manifest = manifest_from_json(read_json(wp.manifest(), "prepare"));
  p.plan = fold_plan_from_json(read_json(wp.folds(), "prepare"));
  const json norm = read_json(wp.norm(), "prepare");
  p.global = norm_stats_from_json(norm.at("global"));
  for (const auto& f : norm.at("folds")) p.fold_norms.push_back(norm_stats_from_json(f));
  if (!fs::exists(fs::path(wp.corpus().string() + ".json"))) {
    throw Error("missing upstream artifact '" + wp.corpus().string() +
                ".json'; run `clinaug prepare` first");
  }
  p.windows = load_corpus(wp.corpus()).records;
  if (p.plan.k != cfg.folds) {
    throw ConfigError("folds.k: config asks for " + std::to_string(cfg.folds) +
                      " folds but the prepared plan has " + std::to_string(p.plan.k) +
                      "; rerun `clinaug prepare`");
  }
  return p;
}

const NormStats& norm_for(const RunConfig& cfg, const Prepared& p, int fold) {
  if (fold < 0 || cfg.global_norm) return p.global;
  return p.fold_norms.at(static_cast<std::size_t>(fold));
}

void check_fold(const RunConfig& cfg, int fold, bool allow_all) {
  if (fold >= cfg.folds || fold < (allow_all ? -1 : 0)) {
    throw ConfigError("fold: must be in [" + std::string(allow_all ? "-1" : "0") + ", " +
                      std::to_string(cfg.folds - 1) + "]");
  }
}

fs::path fold_dir(const RunConfig& cfg, int fold) {
  return fold < 0 ? cfg.work_dir / "fold_all" : WorkPaths{cfg.work_dir}.fold_dir(fold);
}

// Normalized fold-train spectrograms; fold -1 selects every clip.
SpectrogramCorpus fold_train(const RunConfig& cfg, const Prepared& p, int fold) {
  SpectrogramCorpus raw;
  for (const auto& s : p.windows) {
    if (fold < 0 || p.plan.fold_of(s.clip_id) != fold) raw.push_back(s);
  }
  return apply_norm(raw, norm_for(cfg, p, fold));
}

std::optional<std::string> checkpoint_hash(const fs::path& dir) {
  std::ifstream in(dir / "checkpoint.json");
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    if (doc.contains("config_hash")) return doc.at("config_hash").get<std::string>();
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

// The fold's FID feature extractor: reused when trained under the same config.
std::unique_ptr<Classifier> fold_classifier(const RunConfig& cfg, int fold,
                                            const SpectrogramCorpus& train) {
  const fs::path dir = fold_dir(cfg, fold);
  const fs::path weights = dir / "classifier.pt";
  const fs::path meta = dir / "classifier.json";
  ClassifierConfig ccfg = cfg.classifier;
  ccfg.seed = classifier_seed(cfg, fold);
  if (fs::exists(weights) && fs::exists(meta)) {
    const json doc = read_json(meta, "train-gan");
    if (doc.value("config_hash", std::string()) == cfg.hash()) {
      auto model = std::make_unique<Classifier>(ccfg, cfg.mel.n_mels, cfg.mel.frames());
      model->load(weights);
      return model;
    }
  }
  auto trained = train_classifier(train, ccfg);
  fs::create_directories(dir);
  trained.model->save(weights);
  write_json(meta, {{"config_hash", cfg.hash()}, {"fold", fold}, {"config", to_json(ccfg)}});
  return std::move(trained.model);
}

GanCheckpoint train_and_save_gan(const RunConfig& cfg, int fold, const SpectrogramCorpus& train,
                                 const GanConfig& gcfg, const FidReference* ref,
                                 std::optional<GanCheckpoint> resume, const NormStats& norm) {
  const fs::path dir = fold_dir(cfg, fold);
  fs::create_directories(dir);
  TrainOptions options;
  options.fid_log = dir / "fid_log.jsonl";
  if (!resume) fs::remove(options.fid_log);
  options.resume = std::move(resume);
  const TrainResult result = clinaug::train(train, gcfg, ref, options);
  const json extra = {{"config_hash", cfg.hash()}, {"fold", fold}, {"norm", to_json(norm)}};
  save_checkpoint(dir / "gan" / "best", result.best, extra);
  save_checkpoint(dir / "gan" / "last", result.last, extra);
  return result.best;
}

GanCheckpoint load_best(const RunConfig& cfg, int fold) {
  const fs::path dir = fold_dir(cfg, fold) / "gan" / "best";
  if (!fs::exists(dir / "checkpoint.json")) {
    throw Error("missing upstream artifact '" + (dir / "checkpoint.json").string() +
                "'; run `clinaug train-gan --fold " + fold_label(fold) + "` first");
  }
  return load_checkpoint(dir);
}

}  // namespace

void cmd_prepare(const RunConfig& cfg, std::ostream& out) {
  const WorkPaths wp{cfg.work_dir};
  const DatasetManifest manifest = load_manifest(cfg.data_root, cfg.labels_file, cfg.load);
  const LogMelExtractor extractor(cfg.mel);
  SpectrogramCorpus windows;
  for (const auto& ref : manifest.clips) {
    auto specs = extractor.clip_spectrograms(load_clip(ref, cfg.load));
    windows.insert(windows.end(), std::make_move_iterator(specs.begin()),
                   std::make_move_iterator(specs.end()));
  }
  if (windows.empty()) throw Error("no spectrogram windows: every clip is shorter than one window");
  const FoldPlan plan = plan_folds(manifest, cfg.folds, cfg.fold_seed);

  json fold_norms = json::array();
  for (int f = 0; f < plan.k; ++f) {
    SpectrogramCorpus train;
    for (const auto& s : windows) {
      if (plan.fold_of(s.clip_id) != f) train.push_back(s);
    }
    fold_norms.push_back(to_json(fit_norm(train)));
  }
  const NormStats global = fit_norm(windows);

  const std::string hash = cfg.hash();
  fs::create_directories(cfg.work_dir);
  json manifest_doc = manifest_to_json(manifest);
  manifest_doc["config_hash"] = hash;
  write_json(wp.manifest(), manifest_doc);
  json plan_doc = fold_plan_to_json(plan);
  plan_doc["config_hash"] = hash;
  write_json(wp.folds(), plan_doc);
  write_json(wp.norm(), {{"config_hash", hash}, {"global", to_json(global)}, {"folds", fold_norms}});
  StoredCorpus stored;
  stored.records = windows;
  stored.mel_config = cfg.mel;
  stored.extra = {{"config_hash", hash}, {"kind", "windows"}};
  save_corpus(wp.corpus(), stored);

  const auto spec_counts = class_counts(windows);
  out << "clips: " << manifest.size() << " (" << counts_line(manifest.counts) << ")\n";
  out << "spectrograms: " << windows.size() << " (" << counts_line(spec_counts) << ")\n";
  log::info("prepared", {{"clips", manifest.size()}, {"spectrograms", windows.size()}});
  write_provenance(cfg, "prepare",
                   {{"clips", manifest.size()},
                    {"clip_counts", counts_json(manifest.counts)},
                    {"spectrograms", windows.size()},
                    {"spectrogram_counts", counts_json(spec_counts)}});
}

void cmd_train_gan(const RunConfig& cfg, int fold, bool resume, std::ostream& out) {
  check_fold(cfg, fold, true);
  const Prepared p = load_prepared(cfg);
  const auto train = fold_train(cfg, p, fold);
  auto classifier = fold_classifier(cfg, fold, train);
  const FidReference ref(*classifier, train);

  GanConfig gcfg = cfg.gan;
  gcfg.seed = gan_seed(cfg, fold);
  std::optional<GanCheckpoint> start;
  if (resume) {
    const fs::path last = fold_dir(cfg, fold) / "gan" / "last";
    if (!fs::exists(last / "checkpoint.json")) {
      throw Error("cannot resume: missing '" + (last / "checkpoint.json").string() + "'");
    }
    start = load_checkpoint(last);
  }
  const auto best = train_and_save_gan(cfg, fold, train, gcfg, &ref, std::move(start),
                                       norm_for(cfg, p, fold));
  json history = json::array();
  double best_fid = 0.0;
  int best_epoch = 0;
  for (const auto& r : best.fid_history) {
    history.push_back({{"epoch", r.epoch}, {"fid", r.fid}});
    if (best_epoch == 0 || r.fid < best_fid) {
      best_fid = r.fid;
      best_epoch = r.epoch;
    }
  }
  out << "fold " << fold_label(fold) << ": best FID " << best_fid << " at epoch " << best_epoch
      << " of " << gcfg.max_epochs << "\n";
  write_provenance(cfg, "train-gan-" + fold_label(fold),
                   {{"fold", fold}, {"gan_seed", gcfg.seed}, {"fid_history", history}});
}

void cmd_generate(const RunConfig& cfg, int fold, GanStrategy strategy, std::ostream& out) {
  check_fold(cfg, fold, true);
  const Prepared p = load_prepared(cfg);
  const GanCheckpoint ckpt = load_best(cfg, fold);
  const auto train = fold_train(cfg, p, fold);
  const std::string name = strategy == GanStrategy::kDoubled ? "cwgan_doubled" : "cwgan_balanced";
  const auto seed = derive_seed(cfg.seed, name, fold);
  const AugmentedCorpus augmented = synthesize_augmentation(ckpt, train, strategy, seed);

  StoredCorpus stored;
  stored.records = augmented.records;
  stored.mel_config = cfg.mel;
  stored.norm_stats = norm_for(cfg, p, fold);
  stored.extra = {{"config_hash", cfg.hash()},
                  {"fold", fold},
                  {"strategy", name},
                  {"n_original", augmented.n_original}};
  const fs::path stem = fold_dir(cfg, fold) / ("augmented_" + name);
  save_corpus(stem, stored);
  const auto counts = class_counts(augmented.records);
  out << name << " fold " << fold_label(fold) << ": " << augmented.n_original << " real + "
      << augmented.records.size() - augmented.n_original << " generated (" << counts_line(counts)
      << ")\n";
  write_provenance(cfg, "generate-" + name + "-" + fold_label(fold),
                   {{"fold", fold}, {"seed", seed}, {"counts", counts_json(counts)},
                    {"output", stem.string()}});
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out, const fs::path& plan_path) {
  const WorkPaths wp{cfg.work_dir};
  Prepared p = load_prepared(cfg);
  if (!plan_path.empty()) p.plan = fold_plan_from_json(read_json(plan_path, "prepare"));
  bool need_audio = false;
  for (Strategy s : cfg.strategies) need_audio = need_audio || (s != Strategy::kNone && !is_gan_strategy(s));

  std::map<std::string, std::size_t> index;
  std::vector<ClipData> data;
  for (const auto& ref : p.manifest.clips) {
    ClipData d;
    if (need_audio) {
      d.clip = load_clip(ref, cfg.load);
    } else {
      d.clip.clip_id = ref.clip_id;
      d.clip.label = ref.label;
    }
    index[ref.clip_id] = data.size();
    data.push_back(std::move(d));
  }
  for (const auto& s : p.windows) {
    auto it = index.find(s.clip_id);
    if (it == index.end()) throw Error("corpus window references unknown clip '" + s.clip_id + "'");
    data[it->second].windows.push_back(s);
  }

  CvConfig cv;
  cv.mel = cfg.mel;
  cv.classic = cfg.classic;
  cv.gan = cfg.gan;
  cv.classifier = cfg.classifier;
  cv.global_norm = cfg.global_norm;
  cv.seed = cfg.seed;

  const std::string hash = cfg.hash();
  CvHooks hooks;
  hooks.gan_provider = [&](int fold, const SpectrogramCorpus& train, const GanConfig& gcfg,
                           const FidReference* ref) {
    const fs::path best = fold_dir(cfg, fold) / "gan" / "best";
    if (plan_path.empty() && checkpoint_hash(best) == hash) {
      log::info("gan_reused", {{"fold", fold}, {"path", best.string()}});
      return load_checkpoint(best);
    }
    return train_and_save_gan(cfg, fold, train, gcfg, ref, std::nullopt, norm_for(cfg, p, fold));
  };
  const CvResult result = run_cv(data, p.plan, cfg.strategies, cv, hooks);

  json reports = json::array();
  for (const auto& r : result.reports) reports.push_back(to_json(r));
  json folds = json::array();
  for (const auto& f : result.folds) {
    json rec = {{"fold", f.fold},         {"strategy", f.strategy}, {"macro_f1", f.macro_f1},
                {"n_train", f.n_train},   {"n_test", f.n_test},     {"norm", to_json(f.norm)}};
    if (f.best_fid) rec["best_fid"] = *f.best_fid;
    folds.push_back(rec);
  }
  const std::string table = render_table(result.reports);
  write_json(wp.report(), {{"config_hash", hash}, {"reports", reports}, {"folds", folds}});
  {
    std::ofstream txt(wp.report_table(), std::ios::trunc);
    txt << "# config " << hash << "\n" << table;
  }
  out << table;
  write_provenance(cfg, "evaluate", {{"report", wp.report().string()}});
  for (const auto& r : result.reports) {
    if (!r.complete) throw Error("strategy '" + r.strategy + "' incomplete: " + r.error);
  }
}

void cmd_render(const RunConfig& cfg, int fold, ClassLabel label, int n, const fs::path& out_dir,
                std::ostream& out) {
  check_fold(cfg, fold, true);
  if (n < 1) throw ConfigError("n: must be >= 1");
  const GanCheckpoint ckpt = load_best(cfg, fold);
  const json norm_doc = read_json(WorkPaths{cfg.work_dir}.norm(), "prepare");
  const NormStats norm = fold < 0 || cfg.global_norm
                             ? norm_stats_from_json(norm_doc.at("global"))
                             : norm_stats_from_json(norm_doc.at("folds").at(static_cast<std::size_t>(fold)));
  const fs::path dir = out_dir.empty() ? cfg.work_dir / "render" / fold_label(fold) : out_dir;
  const auto seed = derive_seed(cfg.griffin_lim.seed, class_name(label), fold);
  const auto paths = render_samples(ckpt, label, n, dir, norm, cfg.mel, cfg.griffin_lim, seed);
  json files = json::array();
  for (const auto& path : paths) {
    out << path.string() << "\n";
    files.push_back(path.filename().string());
  }
  write_json(dir / "render.json", {{"config_hash", cfg.hash()},
                                   {"fold", fold},
                                   {"class", class_name(label)},
                                   {"seed", seed},
                                   {"files", files}});
  write_provenance(cfg, "render", {{"fold", fold}, {"class", class_name(label)}, {"n", n},
                                   {"out_dir", dir.string()}});
}

void cmd_toy_corpus(const fs::path& out_dir, int n_per_class, std::uint64_t seed, std::ostream& out) {
  if (n_per_class < 1) throw ConfigError("n-per-class: must be >= 1");
  const DatasetManifest manifest = make_toy_corpus(out_dir, n_per_class, seed);
  out << "clips: " << manifest.size() << " (" << counts_line(manifest.counts) << ")\n";
  log::info("toy_corpus", {{"out_dir", out_dir.string()}, {"clips", manifest.size()}, {"seed", seed}});
}

int run_cli(int argc, char** argv, std::ostream& out) {
  CLI::App app{"Class-conditional WGAN-GP augmentation toolkit for log-mel spectrograms", "clinaug"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn or error")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  int fold = 0;
  bool resume = false;
  std::string gan_strategy = "doubled";
  std::vector<std::string> strategies;
  std::string plan_path;
  std::string class_arg;
  int n = 1;
  std::string out_dir;
  int n_per_class = 50;
  std::uint64_t seed = 0;

  auto* prepare = app.add_subcommand("prepare", "Extract spectrograms, plan folds, fit normalization");
  prepare->add_option("--config", config_path, "Run config (JSON)")->required();

  auto* train_gan = app.add_subcommand("train-gan", "Train the cWGAN-GP on one fold's training data");
  train_gan->add_option("--config", config_path, "Run config (JSON)")->required();
  train_gan->add_option("--fold", fold, "Fold index; -1 trains on every clip");
  train_gan->add_flag("--resume", resume, "Continue from the fold's last checkpoint");

  auto* generate = app.add_subcommand("generate", "Write a GAN-augmented training corpus");
  generate->add_option("--config", config_path, "Run config (JSON)")->required();
  generate->add_option("--fold", fold, "Fold index; -1 for the all-clips generator");
  generate->add_option("--strategy", gan_strategy, "doubled or balanced")
      ->check(CLI::IsMember({"doubled", "balanced"}));

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate augmentation strategies");
  evaluate->add_option("--config", config_path, "Run config (JSON)")->required();
  evaluate->add_option("--strategies", strategies, "Overrides the config's strategy list")
      ->delimiter(',');
  evaluate->add_option("--folds", plan_path, "Fold plan JSON replacing the prepared one");

  auto* render = app.add_subcommand("render", "Synthesize WAVs from generated spectrograms");
  render->add_option("--config", config_path, "Run config (JSON)")->required();
  render->add_option("--fold", fold, "Fold whose generator to use; -1 for all clips");
  render->add_option("--class", class_arg, "Class name")->required();
  render->add_option("--n", n, "Number of files");
  render->add_option("--out", out_dir, "Output directory");

  auto* toy = app.add_subcommand("toy-corpus", "Write the synthetic 6-class corpus");
  toy->add_option("--out", out_dir, "Output directory")->required();
  toy->add_option("--n-per-class", n_per_class, "Clips per class");
  toy->add_option("--seed", seed, "Synthesis seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, std::cerr) == 0 ? 0 : 2;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, std::cerr);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, std::cerr);
    return 2;
  }

  const std::map<std::string, log::Level> levels = {{"debug", log::Level::kDebug},
                                                    {"info", log::Level::kInfo},
                                                    {"warn", log::Level::kWarn},
                                                    {"error", log::Level::kError}};
  log::set_level(levels.at(log_level));

  try {
    if (*toy) {
      cmd_toy_corpus(out_dir, n_per_class, seed, out);
      return 0;
    }
    RunConfig cfg = load_run_config(config_path);
    if (*prepare) {
      cmd_prepare(cfg, out);
    } else if (*train_gan) {
      cmd_train_gan(cfg, fold, resume, out);
    } else if (*generate) {
      cmd_generate(cfg, fold, gan_strategy == "doubled" ? GanStrategy::kDoubled : GanStrategy::kBalanced,
                   out);
    } else if (*evaluate) {
      if (!strategies.empty()) {
        json list = strategies;
        json doc = cfg.to_json();
        doc["strategies"] = list;
        cfg = parse_run_config(doc);
      }
      cmd_evaluate(cfg, out, plan_path);
    } else if (*render) {
      cmd_render(cfg, fold, parse_class(class_arg), n, out_dir, out);
    }
    return 0;
  } catch (const ConfigError& e) {
    log::emit(log::Level::kError, "config_error", {{"message", e.what()}});
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log::emit(log::Level::kError, "failed", {{"message", e.what()}});
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace clinaug::cli
