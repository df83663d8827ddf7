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

#include "clinaug/class_label.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace clinaug {

inline constexpr int kDefaultSampleRate = 44100;

struct AudioClip {
  std::string clip_id;
  std::vector<float> samples;
  int sample_rate = kDefaultSampleRate;
  ClassLabel label = ClassLabel::kAdjustment;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Reference to one labeled recording on disk.
struct ClipRef {
  std::string clip_id;
  std::filesystem::path path;
  ClassLabel label = ClassLabel::kAdjustment;
  double duration = 0.0;
};

struct DatasetManifest {
  std::vector<ClipRef> clips;  // sorted by clip_id
  std::array<int, kNumClasses> counts{};

  std::size_t size() const { return clips.size(); }
  const ClipRef& find(const std::string& clip_id) const;
};

struct LoadOptions {
  // Mean-channel conversion of multi-channel files; rejected otherwise.
  bool downmix = false;
  int expected_sample_rate = kDefaultSampleRate;
  // Duration bounds checked at load time; 0 disables the bound.
  double min_duration = 0.0;
  double max_duration = 0.0;
};

// Reads a sidecar label table (one `path,ClassName` row per clip; `#` starts
// a comment, an optional `path,label` header row is skipped). Paths are
// relative to root. Every file is decoded and validated.
DatasetManifest load_manifest(const std::filesystem::path& root,
                              const std::filesystem::path& labels_file,
                              const LoadOptions& options = {});

AudioClip load_clip(const ClipRef& ref, const LoadOptions& options = {});

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc);

// Deterministic assignment of clips to cross-validation folds.
struct FoldPlan {
  std::uint64_t seed = 0;
  int k = 5;
  std::map<std::string, int> assignment;

  int fold_of(const std::string& clip_id) const;
  std::vector<std::string> test_ids(int fold) const;
  std::vector<std::string> train_ids(int fold) const;
};

// Stratified k-fold split: each class is shuffled with the seed and dealt
// round-robin, so per-class fold counts differ by at most one.
FoldPlan plan_folds(const DatasetManifest& manifest, int k, std::uint64_t seed);

nlohmann::json fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const nlohmann::json& doc);

// Parameters of one synthetic toy signal. Exposed so tests can synthesize a
// clip with known structure.
struct ToySignal {
  ClassLabel label = ClassLabel::kAdjustment;
  double duration = 1.0;
  double base_hz = 440.0;    // tone / carrier / chirp start frequency
  double aux_hz = 4.0;       // AM rate, chirp end frequency or band width
  double period_s = 0.06;    // impulse period for hammer-like classes
  double amplitude = 0.5;
  double noise_floor = 0.002;
};

ToySignal random_toy_signal(ClassLabel label, std::uint64_t seed);
std::vector<float> synthesize_toy(const ToySignal& signal, int sample_rate, std::uint64_t seed);

// Writes n_per_class synthetic 16-bit WAV clips per class plus labels.csv into
// out_dir and returns the loaded manifest. Output is byte-identical for a
// fixed seed.
DatasetManifest make_toy_corpus(const std::filesystem::path& out_dir, int n_per_class,
                                std::uint64_t seed);

}  // namespace clinaug
