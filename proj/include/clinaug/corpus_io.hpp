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

#include "clinaug/mel.hpp"
#include "clinaug/spectrogram.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>

namespace clinaug {

// A spectrogram corpus on disk: `<stem>.bin` holds little-endian float32
// records (n_mels * n_frames values each, mel-major) and `<stem>.json` holds
// the index {records:[{clip_id, window_index, label, offset, normalized,
// provenance}], mel_config, norm_stats, ...}.
struct StoredCorpus {
  SpectrogramCorpus records;
  MelConfig mel_config;
  std::optional<NormStats> norm_stats;
  // Free-form header fields (config hash, strategy, fold...).
  nlohmann::json extra = nlohmann::json::object();
};

void save_corpus(const std::filesystem::path& stem, const StoredCorpus& corpus);
StoredCorpus load_corpus(const std::filesystem::path& stem);

nlohmann::json to_json(const NormStats& stats);
NormStats norm_stats_from_json(const nlohmann::json& doc);

}  // namespace clinaug
