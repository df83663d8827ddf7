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

#include <filesystem>
#include <span>
#include <vector>

namespace clinaug {

struct WavData {
  int sample_rate = 0;
  int channels = 0;
  // Interleaved samples scaled to [-1, 1].
  std::vector<float> samples;

  std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
};

// Reads RIFF/WAVE with PCM 16/24/32-bit integer or IEEE 32-bit float data.
WavData read_wav(const std::filesystem::path& path);

// Writes mono 16-bit PCM. Samples are clipped to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path, std::span<const float> samples,
                     int sample_rate);

// Writes mono 32-bit IEEE float.
void write_wav_float32(const std::filesystem::path& path, std::span<const float> samples,
                       int sample_rate);

// Averages channels into a mono signal.
std::vector<float> downmix(const WavData& wav);

}  // namespace clinaug
