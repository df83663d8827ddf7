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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance            run every criterion
//   acceptance 4 5 6      run the listed criteria only
//
// Criteria 1 and 2 need the clinical recordings; point CLINAUG_CLINICAL_DATA
// at the directory holding them and labels.csv.

#include "clinaug/classifier.hpp"
#include "clinaug/cv.hpp"
#include "clinaug/dataset.hpp"
#include "clinaug/errors.hpp"
#include "clinaug/fid.hpp"
#include "clinaug/gan.hpp"
#include "clinaug/log.hpp"
#include "clinaug/mel.hpp"
#include "clinaug/metrics.hpp"
#include "clinaug/stft.hpp"
#include "clinaug/vocoder.hpp"

#include <torch/torch.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace clinaug;

namespace {

// Criterion 1
constexpr int kClinicalClips = 568;
constexpr std::array<int, kNumClasses> kClinicalClipCounts{68, 117, 76, 64, 21, 222};
constexpr int kClinicalSpectrograms = 3597;
constexpr std::array<int, kNumClasses> kClinicalSpecCounts{494, 608, 967, 469, 160, 899};
// Criterion 2
constexpr double kReportedBaselineF1 = 93.90;
constexpr double kBaselineTolerance = 3.0;
// Criterion 3
constexpr int kToyClipsPerClass = 50;
constexpr double kDoubledSlack = 0.5;
constexpr double kDeskBudgetSeconds = 30.0 * 60.0;
// Criterion 4
constexpr double kGpTolerance = 1e-5;
constexpr double kFidTolerance = 1e-6;
constexpr double kF1Tolerance = 1e-9;
constexpr double kF1Example = 0.7333333333;
// Criterion 5
constexpr double kNormTolerance = 1e-6;
constexpr int kGriffinLimIters = 60;
constexpr std::array<int, kNumClasses> kCountContract{494, 608, 967, 469, 160, 899};
// Criterion 6
constexpr std::int64_t kGeneratorParams = 1526084;
constexpr std::int64_t kCriticParams = 4321153;

constexpr int kFolds = 5;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

// Collects sub-check failures for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
};

template <typename... Args>
std::string fmt(const char* format, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("clinaug_accept_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<ClipData> load_clip_data(const DatasetManifest& manifest, const MelConfig& mel,
                                     const LoadOptions& options = {}) {
  const LogMelExtractor extractor(mel);
  std::vector<ClipData> data;
  data.reserve(manifest.size());
  for (const auto& ref : manifest.clips) {
    ClipData d;
    d.clip = load_clip(ref, options);
    d.windows = extractor.clip_spectrograms(d.clip);
    data.push_back(std::move(d));
  }
  return data;
}

const ExperimentReport& report_of(const CvResult& r, const std::string& name) {
  for (const auto& rep : r.reports) {
    if (rep.strategy == name) return rep;
  }
  throw Error("no report for " + name);
}

std::string clinical_root() {
  const char* env = std::getenv("CLINAUG_CLINICAL_DATA");
  return env ? env : "";
}

// ---------------------------------------------------------------------------

Outcome clinical_counts() {
  const std::string root = clinical_root();
  if (root.empty()) return {Status::kSkip, "CLINAUG_CLINICAL_DATA not set"};
  const DatasetManifest manifest = load_manifest(root, fs::path(root) / "labels.csv");
  const auto data = load_clip_data(manifest, MelConfig{});
  std::array<int, kNumClasses> spec_counts{};
  int n_specs = 0;
  for (const auto& d : data) {
    for (const auto& s : d.windows) {
      ++spec_counts[class_id(s.label)];
      ++n_specs;
    }
  }
  Checks c;
  c.expect(static_cast<int>(manifest.size()) == kClinicalClips,
           "clips " + std::to_string(manifest.size()));
  c.expect(manifest.counts == kClinicalClipCounts, "per-class clip counts differ");
  c.expect(n_specs == kClinicalSpectrograms, "spectrograms " + std::to_string(n_specs));
  c.expect(spec_counts == kClinicalSpecCounts, "per-class spectrogram counts differ");
  return {c.ok() ? Status::kPass : Status::kFail,
          c.ok() ? "568 clips, 3597 spectrograms" : c.summary()};
}

Outcome clinical_scores() {
  const std::string root = clinical_root();
  if (root.empty()) return {Status::kSkip, "CLINAUG_CLINICAL_DATA not set"};
  const DatasetManifest manifest = load_manifest(root, fs::path(root) / "labels.csv");
  CvConfig cfg;
  cfg.seed = 0;
  const auto data = load_clip_data(manifest, cfg.mel);
  const FoldPlan plan = plan_folds(manifest, kFolds, 0);
  const std::vector<Strategy> strategies{Strategy::kNone, Strategy::kCwganDoubled};
  const CvResult result = run_cv(data, plan, strategies, cfg);
  const auto& none = report_of(result, "none");
  const auto& doubled = report_of(result, "cwgan_doubled");
  Checks c;
  c.expect(none.complete && doubled.complete, "incomplete run");
  c.expect(std::abs(none.mean - kReportedBaselineF1) <= kBaselineTolerance,
           fmt("baseline %.2f outside 93.90 +- 3", none.mean));
  c.expect(doubled.mean > none.mean, fmt("doubled %.2f <= none %.2f", doubled.mean, none.mean));
  return {c.ok() ? Status::kPass : Status::kFail,
          fmt("none %.2f, doubled %.2f", none.mean, doubled.mean) + (c.ok() ? "" : "; " + c.summary())};
}

// Frame-energy kurtosis of a spectrogram in linear power.
double frame_kurtosis(const Spectrogram& s, const NormStats& norm) {
  std::vector<double> e(static_cast<std::size_t>(s.n_frames), 0.0);
  for (int m = 0; m < s.n_mels; ++m) {
    for (int t = 0; t < s.n_frames; ++t) {
      const double v = s.normalized ? s.at(m, t) * norm.sigma + norm.mu : s.at(m, t);
      e[static_cast<std::size_t>(t)] += std::exp(v);
    }
  }
  double mean = 0.0;
  for (double x : e) mean += x;
  mean /= static_cast<double>(e.size());
  double m2 = 0.0, m4 = 0.0;
  for (double x : e) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= static_cast<double>(e.size());
  m4 /= static_cast<double>(e.size());
  return m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
}

double mean_kurtosis(const SpectrogramCorpus& specs, ClassLabel label, const NormStats& norm) {
  double sum = 0.0;
  int n = 0;
  for (const auto& s : specs) {
    if (s.label != label) continue;
    sum += frame_kurtosis(s, norm);
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

Outcome desk_scale() {
  const auto start = std::chrono::steady_clock::now();
  ScratchDir dir("toy");
  const DatasetManifest manifest = make_toy_corpus(dir.path(), kToyClipsPerClass, 0);

  CvConfig cfg;
  cfg.seed = 0;
  cfg.gan.width = 0.125;
  cfg.gan.max_epochs = 100;
  cfg.gan.fid_interval = 10;
  cfg.classifier.base_width = 8;
  cfg.classifier.epochs = 8;

  const auto data = load_clip_data(manifest, cfg.mel);
  const FoldPlan plan = plan_folds(manifest, kFolds, 0);

  std::map<int, std::vector<FidRecord>> fid;
  std::map<int, GanCheckpoint> gans;
  CvHooks hooks;
  hooks.gan_provider = [&](int fold, const SpectrogramCorpus& train, const GanConfig& gcfg,
                           const FidReference* ref) {
    const TrainResult r = clinaug::train(train, gcfg, ref);
    fid[fold] = r.last.fid_history;
    gans.emplace(fold, r.best);
    return r.best;
  };
  const std::vector<Strategy> strategies{Strategy::kNone, Strategy::kCwganDoubled};
  const CvResult result = run_cv(data, plan, strategies, cfg, hooks);
  const auto& none = report_of(result, "none");
  const auto& doubled = report_of(result, "cwgan_doubled");

  Checks c;
  c.expect(none.complete, "none incomplete: " + none.error);
  c.expect(doubled.complete, "cwgan_doubled incomplete: " + doubled.error);
  c.expect(none.fold_scores.size() == kFolds && doubled.fold_scores.size() == kFolds,
           "expected five fold scores");
  c.expect(doubled.mean >= none.mean - kDoubledSlack,
           fmt("doubled %.2f < none %.2f - 0.5", doubled.mean, none.mean));
  std::string fid_line;
  for (int f = 0; f < kFolds; ++f) {
    const auto& h = fid[f];
    if (h.empty()) {
      c.expect(false, "fold " + std::to_string(f) + " has no FID history");
      continue;
    }
    double best = h.front().fid;
    for (const auto& r : h) best = std::min(best, r.fid);
    c.expect(best < h.front().fid, "fold " + std::to_string(f) + " best FID not below first");
    fid_line += (fid_line.empty() ? "" : ", ") + fmt("%.0f->%.0f", h.front().fid, best);
  }

  // Informational: class conditioning and impulsive structure of fold 0's generator.
  if (gans.count(0)) {
    SpectrogramCorpus train_raw;
    for (const auto& d : data) {
      if (plan.fold_of(d.clip.clip_id) != 0) {
        train_raw.insert(train_raw.end(), d.windows.begin(), d.windows.end());
      }
    }
    const NormStats norm = fit_norm(train_raw);
    const auto train = apply_norm(train_raw, norm);
    ClassifierConfig ccfg = cfg.classifier;
    ccfg.seed = derive_seed(cfg.classifier.seed, "classifier", 0);
    auto model = train_classifier(train, ccfg).model;
    SpectrogramCorpus generated;
    for (ClassLabel label : kAllClasses) {
      auto batch = sample(gans.at(0), label, 40, 99);
      generated.insert(generated.end(), batch.begin(), batch.end());
    }
    std::vector<int> truth;
    for (const auto& s : generated) truth.push_back(class_id(s.label));
    const double cond = accuracy(truth, model->predict(generated));
    std::printf("  info: generated samples classified as their conditioning class: %.1f%% (chance 16.7%%)\n",
                100.0 * cond);
    std::printf("  info: frame-energy kurtosis Insertion/Suction, real %.2f/%.2f, generated %.2f/%.2f\n",
                mean_kurtosis(train, ClassLabel::kInsertion, norm),
                mean_kurtosis(train, ClassLabel::kSuction, norm),
                mean_kurtosis(generated, ClassLabel::kInsertion, norm),
                mean_kurtosis(generated, ClassLabel::kSuction, norm));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(seconds < kDeskBudgetSeconds, fmt("took %.0f s", seconds));
  const std::string detail = fmt("none %.2f%%, cwgan_doubled %.2f%%", none.mean, doubled.mean) +
                             "; FID first->best " + fid_line + fmt("; %.0f s", seconds);
  return {c.ok() ? Status::kPass : Status::kFail, c.ok() ? detail : detail + "; " + c.summary()};
}

// ---------------------------------------------------------------------------

Outcome analytic_oracles() {
  Checks c;
  const auto y = torch::zeros({4}, torch::kInt64);
  const auto x = torch::randn({4, 1, 64, 64});

  auto w = torch::randn({64 * 64}, torch::kFloat64);
  w = (w / w.norm()).to(torch::kFloat32);
  const double gp_unit = gradient_penalty(
      [&](const torch::Tensor& in, const torch::Tensor&) { return in.flatten(1).matmul(w); }, x, y, 10.0)
                             .item<double>();
  c.expect(std::abs(gp_unit) <= kGpTolerance, fmt("unit linear critic gp %.3g", gp_unit));
  const double gp_scaled = gradient_penalty(
      [](const torch::Tensor& in, const torch::Tensor&) { return 3.0 * in.flatten(1).select(1, 0); }, x, y, 10.0)
                               .item<double>();
  c.expect(std::abs(gp_scaled - 40.0) <= kGpTolerance, fmt("3x critic gp %.8g", gp_scaled));
  const double gp_const = gradient_penalty(
      [](const torch::Tensor& in, const torch::Tensor&) { return torch::full({in.size(0)}, 1.5); }, x, y, 10.0)
                              .item<double>();
  c.expect(std::abs(gp_const - 10.0) <= kGpTolerance, fmt("constant critic gp %.8g", gp_const));

  auto stats = [](Eigen::VectorXd mu, Eigen::MatrixXd cov) {
    GaussianStats s;
    s.mu = std::move(mu);
    s.cov = std::move(cov);
    s.n = 100;
    return s;
  };
  const auto i4 = stats(Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4));
  const double fid0 = frechet_distance(i4, i4);
  const double fid1 = frechet_distance(i4, stats(Eigen::VectorXd::Unit(4, 0), Eigen::MatrixXd::Identity(4, 4)));
  const double fid2 = frechet_distance(stats(Eigen::VectorXd::Zero(2), 4.0 * Eigen::MatrixXd::Identity(2, 2)),
                                       stats(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)));
  c.expect(std::abs(fid0) <= kFidTolerance, fmt("identical FID %.3g", fid0));
  c.expect(std::abs(fid1 - 1.0) <= kFidTolerance, fmt("mean-shift FID %.10g", fid1));
  c.expect(std::abs(fid2 - 2.0) <= kFidTolerance, fmt("commuting FID %.10g", fid2));

  const std::vector<int> t{0, 0, 1, 1}, p{0, 1, 1, 1};
  const double f1 = macro_f1(t, p, 2);
  c.expect(std::abs(f1 - kF1Example) <= kF1Tolerance, fmt("macro F1 %.12f", f1));

  const auto real = torch::randn({3, 1, 64, 64});
  const auto fake = torch::randn({3, 1, 64, 64});
  c.expect(torch::equal(interpolate(real, fake, torch::ones({3})), real), "eps = 1 not bit-exact");
  c.expect(torch::equal(interpolate(real, fake, torch::zeros({3})), fake), "eps = 0 not bit-exact");

  return {c.ok() ? Status::kPass : Status::kFail,
          c.ok() ? fmt("gp %.1e/%.6f/%.6f", gp_unit, gp_scaled, gp_const) + fmt(", FID 0/%.8f/%.8f", fid1, fid2) +
                       fmt(", F1 %.10f", f1)
                 : c.summary()};
}

Outcome invariants() {
  Checks c;
  ScratchDir dir("inv");
  const DatasetManifest manifest = make_toy_corpus(dir.path(), 10, 3);
  const MelConfig mel;
  const auto data = load_clip_data(manifest, mel);

  // Folds partition the clips and keep every class within one clip of even.
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    const FoldPlan plan = plan_folds(manifest, kFolds, seed);
    std::set<std::string> seen;
    std::array<std::array<int, kNumClasses>, kFolds> per_fold{};
    for (int f = 0; f < kFolds; ++f) {
      const auto test = plan.test_ids(f);
      const auto train = plan.train_ids(f);
      c.expect(test.size() + train.size() == manifest.size(), "fold sizes do not add up");
      for (const auto& id : test) {
        c.expect(seen.insert(id).second, "clip in two test folds: " + id);
        ++per_fold[f][class_id(manifest.find(id).label)];
      }
      std::set<std::string> tr(train.begin(), train.end());
      for (const auto& id : test) c.expect(!tr.count(id), "clip both train and test: " + id);
    }
    c.expect(seen.size() == manifest.size(), "test folds do not cover the corpus");
    for (int k = 0; k < kNumClasses; ++k) {
      int lo = 1 << 30, hi = 0;
      for (int f = 0; f < kFolds; ++f) {
        lo = std::min(lo, per_fold[f][k]);
        hi = std::max(hi, per_fold[f][k]);
      }
      c.expect(hi - lo <= 1, "class " + std::string(class_name(class_from_id(k))) + " not stratified");
    }
  }

  // Shapes and normalization round trip.
  SpectrogramCorpus all;
  for (const auto& d : data) all.insert(all.end(), d.windows.begin(), d.windows.end());
  for (const auto& s : all) {
    c.expect(s.n_mels == 64 && s.n_frames == 64 && s.size() == 64u * 64u, "spectrogram not 64x64");
  }
  const NormStats norm = fit_norm(all);
  double worst = 0.0;
  for (const auto& s : all) {
    const Spectrogram back = invert_norm(apply_norm(s, norm), norm);
    for (std::size_t i = 0; i < s.size(); ++i) {
      // float32 storage: measured relative to the value's magnitude
      const double scale = std::max(1.0, std::abs(static_cast<double>(s.values[i])));
      worst = std::max(worst, std::abs(static_cast<double>(back.values[i]) - s.values[i]) / scale);
    }
  }
  c.expect(worst <= kNormTolerance, fmt("normalization round trip %.3g", worst));

  // Leakage under every strategy family, checked by run_cv's guard and again here.
  const FoldPlan plan = plan_folds(manifest, kFolds, 0);
  CvConfig cfg;
  cfg.classifier.base_width = 4;
  cfg.classifier.epochs = 1;
  cfg.gan.width = 0.125;
  const std::vector<Strategy> every{Strategy::kNone,        Strategy::kNoise,        Strategy::kPitch,
                                    Strategy::kStretch,     Strategy::kSpecAugment,  Strategy::kCwganDoubled,
                                    Strategy::kCwganBalanced};
  CvHooks hooks;
  hooks.gan_provider = [&](int fold, const SpectrogramCorpus& train, const GanConfig& gcfg, const FidReference*) {
    std::set<std::string> test;
    for (const auto& id : plan.test_ids(fold)) test.insert(id);
    for (const auto& s : train) c.expect(!test.count(s.clip_id), "GAN trained on test clip " + s.clip_id);
    return GanTrainer(train, gcfg).checkpoint();
  };
  bool leak_guard_fires = false;
  try {
    check_no_leakage({"a", "b"}, {"b"});
  } catch (const Error&) {
    leak_guard_fires = true;
  }
  c.expect(leak_guard_fires, "leakage guard did not fire");
  const CvResult cv = run_cv(data, plan, every, cfg, hooks);
  for (const auto& r : cv.reports) c.expect(r.complete, r.strategy + " failed: " + r.error);

  // Doubling and balancing contracts.
  c.expect(synthesis_plan(kCountContract, GanStrategy::kDoubled) == kCountContract, "doubling plan");
  const auto fill = synthesis_plan(kCountContract, GanStrategy::kBalanced);
  for (int k = 0; k < kNumClasses; ++k) c.expect(kCountContract[k] + fill[k] == 967, "balancing plan");
  {
    SpectrogramCorpus skewed = apply_norm(all, norm);
    std::erase_if(skewed, [&, n = 0](const Spectrogram& s) mutable {
      return s.label == ClassLabel::kSawing && ++n > 5;
    });
    GanConfig gcfg;
    gcfg.width = 0.125;
    const GanCheckpoint ckpt = GanTrainer(skewed, gcfg).checkpoint();
    const auto before = class_counts(skewed);
    const auto doubled = class_counts(synthesize_augmentation(ckpt, skewed, GanStrategy::kDoubled, 1).records);
    const auto balanced = synthesize_augmentation(ckpt, skewed, GanStrategy::kBalanced, 1);
    const auto bal = class_counts(balanced.records);
    const int top = *std::max_element(before.begin(), before.end());
    for (int k = 0; k < kNumClasses; ++k) {
      c.expect(doubled[k] == 2 * before[k], "doubled count");
      c.expect(bal[k] == top, "balanced count");
    }
    for (std::size_t i = balanced.n_original; i < balanced.records.size(); ++i) {
      const auto& s = balanced.records[i];
      c.expect(s.clip_id.find(std::string(class_name(s.label))) != std::string::npos, "generated label mismatch");
    }
  }

  // Griffin-Lim without momentum never increases spectral convergence.
  double worst_rise = 0.0;
  for (ClassLabel label : kAllClasses) {
    auto x = synthesize_toy(random_toy_signal(label, 8), mel.sample_rate, 8);
    x.resize(static_cast<std::size_t>(mel.window_len));
    const Eigen::MatrixXd mag = Stft(mel.n_fft, mel.hop).forward(x).cwiseAbs();
    GriffinLimConfig gl;
    gl.momentum = 0.0;
    gl.n_iters = kGriffinLimIters;
    const auto sc = griffin_lim(mag, mel, gl).spectral_convergence;
    c.expect(sc.size() == static_cast<std::size_t>(kGriffinLimIters), "iteration count");
    for (std::size_t i = 1; i < sc.size(); ++i) worst_rise = std::max(worst_rise, sc[i] - sc[i - 1]);
    c.expect(sc.back() < sc.front(), "no progress for " + std::string(class_name(label)));
  }
  c.expect(worst_rise <= 0.0, fmt("Griffin-Lim convergence rose by %.3g", worst_rise));

  return {c.ok() ? Status::kPass : Status::kFail,
          c.ok() ? fmt("norm round trip %.2g, largest Griffin-Lim step change %.2g", worst, worst_rise)
                 : c.summary()};
}

Outcome architecture() {
  GanConfig cfg;
  Generator g(cfg);
  Critic d(cfg);
  const auto ng = count_parameters(*g);
  const auto nd = count_parameters(*d);
  const std::string detail = "generator " + std::to_string(ng) + " (reference " + std::to_string(kGeneratorParams) +
                             "), critic " + std::to_string(nd) + " (reference " + std::to_string(kCriticParams) + ")";
  // A mismatch is reported but does not fail the criterion.
  return {Status::kPass, detail + (ng == kGeneratorParams && nd == kCriticParams ? ", exact match" : ", differs")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  log::set_level(log::Level::kWarn);
  torch::manual_seed(0);
  const std::vector<Criterion> criteria{
      {1, "clinical corpus counts", clinical_counts},
      {2, "clinical 5-fold macro F1", clinical_scores},
      {3, "desk-scale toy pipeline", desk_scale},
      {4, "analytic oracles", analytic_oracles},
      {5, "invariants", invariants},
      {6, "architecture report", architecture},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %d %s: %s\n", tag, c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (o.status == Status::kFail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
