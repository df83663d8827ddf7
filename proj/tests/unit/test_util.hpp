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

#include "clinaug/dataset.hpp"
#include "clinaug/spectrogram.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace clinaug::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("clinaug_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<float> sine(double hz, std::size_t n, int rate = 44100, double amp = 0.5) {
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(amp * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / rate));
  }
  return out;
}

inline AudioClip clip_of(std::vector<float> samples, const std::string& id = "clip",
                         ClassLabel label = ClassLabel::kAdjustment) {
  AudioClip c;
  c.clip_id = id;
  c.samples = std::move(samples);
  c.label = label;
  return c;
}

inline Spectrogram filled(float value, ClassLabel label = ClassLabel::kAdjustment,
                          const std::string& clip = "c", int index = 0) {
  Spectrogram s(64, 64, value);
  s.label = label;
  s.clip_id = clip;
  s.window_index = index;
  return s;
}

inline Spectrogram random_spec(std::mt19937_64& rng, ClassLabel label, const std::string& clip,
                               int index = 0) {
  std::normal_distribution<float> dist(0.0f, 1.0f);
  Spectrogram s(64, 64);
  for (auto& v : s.values) v = dist(rng);
  s.label = label;
  s.clip_id = clip;
  s.window_index = index;
  return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path) << text;
}

}  // namespace clinaug::testing
