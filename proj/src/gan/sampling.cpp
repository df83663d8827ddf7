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

#include "clinaug/gan.hpp"

#include "clinaug/errors.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <algorithm>
#include <cstring>

namespace clinaug {

SpectrogramCorpus sample_labels(Generator& generator, const GanConfig& cfg,
                                std::span<const ClassLabel> labels, std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  auto rng = at::make_generator<at::CPUGeneratorImpl>(seed);
  SpectrogramCorpus out;
  out.reserve(labels.size());
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < labels.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, labels.size() - start);
    std::vector<std::int64_t> ids(count);
    for (std::size_t i = 0; i < count; ++i) ids[i] = class_id(labels[start + i]);
    const auto z = torch::randn({static_cast<std::int64_t>(count), cfg.latent_dim}, rng, torch::kFloat32);
    const auto x = generator->forward(z, torch::tensor(ids, torch::kInt64)).contiguous();
    const float* src = x.data_ptr<float>();
    const std::size_t n = static_cast<std::size_t>(x.size(2) * x.size(3));
    for (std::size_t i = 0; i < count; ++i) {
      Spectrogram s(static_cast<int>(x.size(2)), static_cast<int>(x.size(3)));
      std::memcpy(s.values.data(), src + i * n, n * sizeof(float));
      s.label = labels[start + i];
      s.normalized = true;
      s.clip_id = "generated";
      s.window_index = static_cast<int>(start + i);
      s.provenance = {"cwgan", seed, -1};
      if (!s.all_finite()) throw Error("generator produced non-finite values");
      out.push_back(std::move(s));
    }
  }
  return out;
}

SpectrogramCorpus sample(const GanCheckpoint& ckpt, ClassLabel label, int n, std::uint64_t seed) {
  if (n < 1) throw Error("sample: n must be >= 1");
  Generator g = restore_generator(ckpt);
  const std::vector<ClassLabel> labels(static_cast<std::size_t>(n), label);
  return sample_labels(g, ckpt.config, labels, seed);
}

std::array<int, kNumClasses> synthesis_plan(const std::array<int, kNumClasses>& counts,
                                            GanStrategy strategy) {
  std::array<int, kNumClasses> plan{};
  const int max_count = *std::max_element(counts.begin(), counts.end());
  for (int c = 0; c < kNumClasses; ++c) {
    plan[c] = strategy == GanStrategy::kDoubled ? counts[c] : max_count - counts[c];
  }
  return plan;
}

AugmentedCorpus synthesize_augmentation(const GanCheckpoint& ckpt,
                                        std::span<const Spectrogram> corpus, GanStrategy strategy,
                                        std::uint64_t seed) {
  const std::string name = strategy == GanStrategy::kDoubled ? "cwgan_doubled" : "cwgan_balanced";
  const auto plan = synthesis_plan(class_counts(corpus), strategy);
  Generator g = restore_generator(ckpt);

  AugmentedCorpus out;
  out.records.assign(corpus.begin(), corpus.end());
  out.n_original = corpus.size();
  for (ClassLabel c : kAllClasses) {
    const int n = plan[class_id(c)];
    if (n <= 0) continue;
    const std::vector<ClassLabel> labels(static_cast<std::size_t>(n), c);
    const auto class_seed = derive_seed(seed, class_name(c), 0);
    auto generated = sample_labels(g, ckpt.config, labels, class_seed);
    for (std::size_t i = 0; i < generated.size(); ++i) {
      auto& s = generated[i];
      s.clip_id = name + "/" + std::string(class_name(c)) + "/" + std::to_string(i);
      s.window_index = 0;
      s.provenance = {name, class_seed, -1};
      out.records.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace clinaug
