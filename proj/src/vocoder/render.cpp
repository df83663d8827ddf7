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

#include "clinaug/render.hpp"

#include "clinaug/errors.hpp"
#include "clinaug/wav.hpp"

#include <system_error>

namespace clinaug {

std::vector<std::filesystem::path> render_samples(const GanCheckpoint& ckpt, ClassLabel label, int n,
                                                  const std::filesystem::path& out_dir,
                                                  const NormStats& norm, const MelConfig& mel,
                                                  const GriffinLimConfig& gl, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }
  const auto specs = sample(ckpt, label, n, seed);
  std::vector<std::filesystem::path> paths;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto samples = spectrogram_to_audio(specs[i], norm, mel, gl);
    peak_normalize(samples);
    const auto path = out_dir / (std::string(class_name(label)) + "_" + std::to_string(i) + ".wav");
    write_wav_pcm16(path, samples, mel.sample_rate);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace clinaug
