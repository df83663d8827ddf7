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
#include "clinaug/gan.hpp"
#include "clinaug/mel.hpp"
#include "clinaug/spectrogram.hpp"
#include "clinaug/vocoder.hpp"

#include <filesystem>
#include <vector>

namespace clinaug {

// Generates n spectrograms of one class and writes each as a peak-normalized
// 16-bit mono WAV named {Class}_{index}.wav.
std::vector<std::filesystem::path> render_samples(const GanCheckpoint& ckpt, ClassLabel label, int n,
                                                  const std::filesystem::path& out_dir,
                                                  const NormStats& norm, const MelConfig& mel,
                                                  const GriffinLimConfig& gl, std::uint64_t seed);

}  // namespace clinaug
