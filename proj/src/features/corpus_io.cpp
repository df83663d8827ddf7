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

#include "clinaug/corpus_io.hpp"

#include "clinaug/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace clinaug {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(const fs::path& stem, const char* suffix) {
  return fs::path(stem.string() + suffix);
}

static_assert(std::endian::native == std::endian::little,
              "corpus files are little-endian; add byte swapping for this platform");

nlohmann::json provenance_json(const Provenance& p) {
  return {{"strategy", p.strategy}, {"seed", p.seed}, {"source_record", p.source_record}};
}

}  // namespace

nlohmann::json to_json(const NormStats& stats) { return {{"mu", stats.mu}, {"sigma", stats.sigma}}; }

NormStats norm_stats_from_json(const nlohmann::json& doc) {
  NormStats s{doc.at("mu").get<double>(), doc.at("sigma").get<double>()};
  if (!(s.sigma > 0.0)) throw Error("norm_stats.sigma must be positive");
  return s;
}

void save_corpus(const fs::path& stem, const StoredCorpus& corpus) {
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  const fs::path bin = with_suffix(stem, ".bin");
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + bin.string() + "'");

  nlohmann::json records = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& s : corpus.records) {
    if (s.n_mels != corpus.mel_config.n_mels || s.n_frames != corpus.mel_config.frames()) {
      throw Error("record '" + s.clip_id + "' has shape " + std::to_string(s.n_mels) + "x" +
                  std::to_string(s.n_frames) + ", corpus expects " +
                  std::to_string(corpus.mel_config.n_mels) + "x" +
                  std::to_string(corpus.mel_config.frames()));
    }
    out.write(reinterpret_cast<const char*>(s.values.data()),
              static_cast<std::streamsize>(s.values.size() * sizeof(float)));
    nlohmann::json rec = {{"clip_id", s.clip_id},
                          {"window_index", s.window_index},
                          {"label", std::string(class_name(s.label))},
                          {"offset", offset},
                          {"normalized", s.normalized}};
    if (!s.provenance.strategy.empty()) rec["provenance"] = provenance_json(s.provenance);
    records.push_back(std::move(rec));
    offset += s.values.size() * sizeof(float);
  }
  out.close();
  if (!out) throw Error("failed writing '" + bin.string() + "'");

  nlohmann::json index = corpus.extra.is_object() ? corpus.extra : nlohmann::json::object();
  index["records"] = std::move(records);
  index["mel_config"] = to_json(corpus.mel_config);
  index["record_values"] = corpus.mel_config.n_mels * corpus.mel_config.frames();
  index["norm_stats"] = corpus.norm_stats ? to_json(*corpus.norm_stats) : nlohmann::json(nullptr);

  const fs::path idx = with_suffix(stem, ".json");
  std::ofstream js(idx, std::ios::trunc);
  if (!js) throw Error("cannot write '" + idx.string() + "'");
  js << index.dump(1) << '\n';
}

StoredCorpus load_corpus(const fs::path& stem) {
  const fs::path idx = with_suffix(stem, ".json");
  const fs::path bin = with_suffix(stem, ".bin");
  std::ifstream js(idx);
  if (!js) throw Error("missing corpus index '" + idx.string() + "'");
  nlohmann::json index;
  try {
    js >> index;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed corpus index '" + idx.string() + "': " + e.what());
  }
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error("missing corpus data '" + bin.string() + "'");

  StoredCorpus corpus;
  corpus.mel_config = mel_config_from_json(index.at("mel_config"));
  if (!index.at("norm_stats").is_null()) {
    corpus.norm_stats = norm_stats_from_json(index.at("norm_stats"));
  }
  const int n_mels = corpus.mel_config.n_mels;
  const int n_frames = corpus.mel_config.frames();
  const std::size_t n_values = static_cast<std::size_t>(n_mels) * n_frames;

  for (const auto& rec : index.at("records")) {
    Spectrogram s(n_mels, n_frames);
    s.clip_id = rec.at("clip_id").get<std::string>();
    s.window_index = rec.at("window_index").get<int>();
    s.label = parse_class(rec.at("label").get<std::string>());
    s.normalized = rec.value("normalized", false);
    if (rec.contains("provenance")) {
      const auto& p = rec["provenance"];
      s.provenance.strategy = p.value("strategy", "");
      s.provenance.seed = p.value("seed", std::uint64_t{0});
      s.provenance.source_record = p.value("source_record", std::int64_t{-1});
    }
    in.seekg(static_cast<std::streamoff>(rec.at("offset").get<std::uint64_t>()));
    in.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(n_values * sizeof(float)));
    if (!in) throw Error("truncated corpus data in '" + bin.string() + "'");
    corpus.records.push_back(std::move(s));
  }
  index.erase("records");
  index.erase("mel_config");
  index.erase("norm_stats");
  index.erase("record_values");
  corpus.extra = std::move(index);
  return corpus;
}

}  // namespace clinaug
