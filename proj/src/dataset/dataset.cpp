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

#include "clinaug/dataset.hpp"

#include "clinaug/errors.hpp"
#include "clinaug/rng.hpp"
#include "clinaug/wav.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace clinaug {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string clip_id_for(const fs::path& relative) {
  fs::path p = relative;
  p.replace_extension();
  return p.generic_string();
}

bool has_wav_files(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return false;
  for (const auto& entry : fs::recursive_directory_iterator(root, ec)) {
    if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".wav") return true;
  }
  return false;
}

struct LabelRow {
  fs::path relative;
  ClassLabel label;
};

std::vector<LabelRow> read_label_rows(const fs::path& labels_file) {
  std::ifstream in(labels_file);
  if (!in) throw Error("cannot read labels file '" + labels_file.string() + "'");
  std::vector<LabelRow> rows;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto sep = t.find_first_of(",\t");
    if (sep == std::string::npos) {
      throw Error(labels_file.string() + ":" + std::to_string(line_no) +
                  ": expected 'path,class'");
    }
    const std::string path = trim(t.substr(0, sep));
    const std::string name = trim(t.substr(sep + 1));
    if (first && lower(path) == "path") {
      first = false;
      continue;
    }
    first = false;
    try {
      rows.push_back({fs::path(path), parse_class(name)});
    } catch (const Error& e) {
      throw Error(labels_file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

const ClipRef& DatasetManifest::find(const std::string& clip_id) const {
  auto it = std::lower_bound(clips.begin(), clips.end(), clip_id,
                             [](const ClipRef& c, const std::string& id) { return c.clip_id < id; });
  if (it == clips.end() || it->clip_id != clip_id) throw Error("unknown clip id '" + clip_id + "'");
  return *it;
}

AudioClip load_clip(const ClipRef& ref, const LoadOptions& options) {
  if (!fs::exists(ref.path)) throw Error("missing file '" + ref.path.string() + "'");
  WavData wav = read_wav(ref.path);
  if (wav.channels != 1 && !options.downmix) {
    throw Error("non-mono audio (" + std::to_string(wav.channels) + " channels) in '" +
                ref.path.string() + "'; enable downmix to average channels");
  }
  if (options.expected_sample_rate > 0 && wav.sample_rate != options.expected_sample_rate) {
    throw Error("sample rate " + std::to_string(wav.sample_rate) + " Hz in '" +
                ref.path.string() + "', expected " + std::to_string(options.expected_sample_rate));
  }
  AudioClip clip;
  clip.clip_id = ref.clip_id;
  clip.label = ref.label;
  clip.sample_rate = wav.sample_rate;
  clip.samples = wav.channels == 1 ? std::move(wav.samples) : downmix(wav);
  return clip;
}

DatasetManifest load_manifest(const fs::path& root, const fs::path& labels_file,
                              const LoadOptions& options) {
  if (!fs::exists(labels_file)) {
    if (!has_wav_files(root)) throw Error("no clips found in '" + root.string() + "'");
    throw Error("labels file not found: '" + labels_file.string() + "'");
  }
  const auto rows = read_label_rows(labels_file);
  if (rows.empty()) throw Error("no clips found in '" + labels_file.string() + "'");

  DatasetManifest manifest;
  manifest.clips.reserve(rows.size());
  for (const auto& row : rows) {
    ClipRef ref;
    ref.clip_id = clip_id_for(row.relative);
    ref.path = row.relative.is_absolute() ? row.relative : root / row.relative;
    ref.label = row.label;
    const AudioClip clip = load_clip(ref, options);
    ref.duration = clip.duration();
    if (options.min_duration > 0.0 && ref.duration < options.min_duration) {
      throw Error("clip '" + ref.clip_id + "' shorter than " +
                  std::to_string(options.min_duration) + " s");
    }
    if (options.max_duration > 0.0 && ref.duration > options.max_duration) {
      throw Error("clip '" + ref.clip_id + "' longer than " +
                  std::to_string(options.max_duration) + " s");
    }
    manifest.clips.push_back(std::move(ref));
  }
  std::sort(manifest.clips.begin(), manifest.clips.end(),
            [](const ClipRef& a, const ClipRef& b) { return a.clip_id < b.clip_id; });
  for (std::size_t i = 1; i < manifest.clips.size(); ++i) {
    if (manifest.clips[i].clip_id == manifest.clips[i - 1].clip_id) {
      throw Error("duplicate clip id '" + manifest.clips[i].clip_id + "'");
    }
  }
  for (const auto& c : manifest.clips) ++manifest.counts[class_id(c.label)];
  return manifest;
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json clips = nlohmann::json::array();
  for (const auto& c : manifest.clips) {
    clips.push_back({{"id", c.clip_id},
                     {"path", c.path.generic_string()},
                     {"label", std::string(class_name(c.label))},
                     {"duration", c.duration}});
  }
  nlohmann::json counts = nlohmann::json::object();
  for (ClassLabel c : kAllClasses) counts[std::string(class_name(c))] = manifest.counts[class_id(c)];
  return {{"clips", clips}, {"counts", counts}};
}

DatasetManifest manifest_from_json(const nlohmann::json& doc) {
  DatasetManifest m;
  for (const auto& c : doc.at("clips")) {
    ClipRef ref;
    ref.clip_id = c.at("id").get<std::string>();
    ref.path = c.at("path").get<std::string>();
    ref.label = parse_class(c.at("label").get<std::string>());
    ref.duration = c.value("duration", 0.0);
    m.clips.push_back(std::move(ref));
  }
  std::sort(m.clips.begin(), m.clips.end(),
            [](const ClipRef& a, const ClipRef& b) { return a.clip_id < b.clip_id; });
  for (const auto& c : m.clips) ++m.counts[class_id(c.label)];
  return m;
}

int FoldPlan::fold_of(const std::string& clip_id) const {
  auto it = assignment.find(clip_id);
  if (it == assignment.end()) throw Error("clip '" + clip_id + "' has no fold");
  return it->second;
}

std::vector<std::string> FoldPlan::test_ids(int fold) const {
  std::vector<std::string> ids;
  for (const auto& [id, f] : assignment) {
    if (f == fold) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> FoldPlan::train_ids(int fold) const {
  std::vector<std::string> ids;
  for (const auto& [id, f] : assignment) {
    if (f != fold) ids.push_back(id);
  }
  return ids;
}

FoldPlan plan_folds(const DatasetManifest& manifest, int k, std::uint64_t seed) {
  if (k < 2) throw Error("fold count must be at least 2, got " + std::to_string(k));
  std::array<std::vector<std::string>, kNumClasses> by_class;
  for (const auto& c : manifest.clips) by_class[class_id(c.label)].push_back(c.clip_id);
  for (ClassLabel c : kAllClasses) {
    const auto n = by_class[class_id(c)].size();
    if (n < static_cast<std::size_t>(k)) {
      throw Error("class " + std::string(class_name(c)) + " has " + std::to_string(n) +
                  " clips, fewer than the " + std::to_string(k) + " folds");
    }
  }

  FoldPlan plan;
  plan.seed = seed;
  plan.k = k;
  Rng rng(seed);
  // Rotating the starting fold per class spreads remainders so total fold
  // sizes stay balanced as well.
  std::size_t offset = 0;
  for (auto& ids : by_class) {
    std::sort(ids.begin(), ids.end());
    rng.shuffle(std::span<std::string>(ids));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      plan.assignment[ids[i]] = static_cast<int>((offset + i) % k);
    }
    offset = (offset + ids.size()) % k;
  }
  return plan;
}

nlohmann::json fold_plan_to_json(const FoldPlan& plan) {
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [id, f] : plan.assignment) assignment[id] = f;
  return {{"seed", plan.seed}, {"k", plan.k}, {"assignment", assignment}};
}

FoldPlan fold_plan_from_json(const nlohmann::json& doc) {
  FoldPlan plan;
  plan.seed = doc.at("seed").get<std::uint64_t>();
  plan.k = doc.at("k").get<int>();
  for (auto it = doc.at("assignment").begin(); it != doc.at("assignment").end(); ++it) {
    const int f = it.value().get<int>();
    if (f < 0 || f >= plan.k) throw Error("fold index out of range for '" + it.key() + "'");
    plan.assignment[it.key()] = f;
  }
  return plan;
}

}  // namespace clinaug
