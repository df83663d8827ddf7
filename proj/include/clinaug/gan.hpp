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
#include "clinaug/rng.hpp"
#include "clinaug/feature_extractor.hpp"
#include "clinaug/spectrogram.hpp"

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace clinaug {

struct GanConfig {
  int latent_dim = 128;
  int n_classes = kNumClasses;
  int embed_dim = 6;
  double gp_weight = 10.0;
  int n_critic = 5;
  int batch_size = 64;
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  int max_epochs = 600;
  int fid_interval = 10;
  int fid_samples = 1024;
  std::uint64_t seed = 0;
  // Channel multiplier for both networks; 1.0 is the full-size model.
  double width = 1.0;
  double leaky_slope = 0.2;
  // Abort when |epoch-mean critic loss| exceeds the limit this many epochs in a row.
  double divergence_limit = 1e4;
  int divergence_patience = 3;

  void validate() const;
};

nlohmann::json to_json(const GanConfig& cfg);
GanConfig gan_config_from_json(const nlohmann::json& doc);

// (z, class) -> 1 x 64 x 64. The class embedding is concatenated to z and a
// bias-free dense mapping produces a 4 x 4 seed tensor, followed by four
// nearest-neighbour x2 upsampling + 3x3 conv stages and a linear 3x3 output
// conv.
class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const GanConfig& cfg);
  torch::Tensor forward(const torch::Tensor& z, const torch::Tensor& labels);

 private:
  std::int64_t seed_channels_;
  double slope_;
  torch::nn::Embedding embed_{nullptr};
  torch::nn::Linear mapping_{nullptr};
  torch::nn::ModuleList stages_{nullptr};
  torch::nn::Conv2d output_{nullptr};
};
TORCH_MODULE(Generator);

// (x, class) -> scalar score. The one-hot class is repeated into six
// constant 64 x 64 planes and stacked with x, followed by four 5x5 stride-2
// conv stages and a dense output. No normalization layers.
class CriticImpl : public torch::nn::Module {
 public:
  explicit CriticImpl(const GanConfig& cfg);
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& labels);

 private:
  std::int64_t n_classes_;
  double slope_;
  torch::nn::ModuleList stages_{nullptr};
  torch::nn::Linear output_{nullptr};
};
TORCH_MODULE(Critic);

std::int64_t count_parameters(torch::nn::Module& module);

// eps * real + (1 - eps) * fake with one eps per sample.
torch::Tensor interpolate(const torch::Tensor& real, const torch::Tensor& fake,
                          const torch::Tensor& eps);

using CriticFn = std::function<torch::Tensor(const torch::Tensor&, const torch::Tensor&)>;

// weight * mean_batch (||grad_x D(x, y)||_2 - 1)^2, the norm taken over all
// entries of each sample. Differentiable w.r.t. the critic parameters.
torch::Tensor gradient_penalty(const CriticFn& critic, const torch::Tensor& x_hat,
                               const torch::Tensor& labels, double weight);

// mean(d_fake) - mean(d_real) + gp
torch::Tensor critic_loss(const torch::Tensor& d_real, const torch::Tensor& d_fake,
                          const torch::Tensor& gp);
// -mean(d_fake)
torch::Tensor generator_loss(const torch::Tensor& d_fake);

struct FidRecord {
  int epoch = 0;
  double fid = 0.0;
  std::int64_t n_real = 0;
  std::int64_t n_fake = 0;
};

// Full training state. Network and optimizer states are kept in libtorch's
// serialized form so a checkpoint is an ordinary copyable value.
struct GanCheckpoint {
  GanConfig config;
  int epoch = 0;
  std::int64_t generator_steps = 0;
  std::int64_t critic_steps = 0;
  std::string generator_state;
  std::string critic_state;
  std::string generator_optim_state;
  std::string critic_optim_state;
  std::string torch_rng_state;
  std::string data_rng_state;
  std::vector<FidRecord> fid_history;
};

// Writes generator.pt, critic.pt, the optimizer/RNG states and
// checkpoint.json {epoch, fid_history, config, rng_seed, ...extra}.
void save_checkpoint(const std::filesystem::path& dir, const GanCheckpoint& ckpt,
                     const nlohmann::json& extra = nlohmann::json::object());
GanCheckpoint load_checkpoint(const std::filesystem::path& dir);

Generator restore_generator(const GanCheckpoint& ckpt);
Critic restore_critic(const GanCheckpoint& ckpt);

struct EpochStats {
  int epoch = 0;
  double critic_loss = 0.0;
  double generator_loss = 0.0;
  double gradient_penalty = 0.0;
  // mean(D(real)) - mean(D(fake)), the critic's Wasserstein estimate.
  double wasserstein = 0.0;
};

struct StepLosses {
  double critic_loss = 0.0;
  double gradient_penalty = 0.0;
  double wasserstein = 0.0;
};

// Owns networks, optimizers and random state for one training run.
class GanTrainer {
 public:
  GanTrainer(SpectrogramCorpus corpus, const GanConfig& cfg);
  explicit GanTrainer(SpectrogramCorpus corpus, const GanCheckpoint& resume);

  // One critic update on the given real batch with fresh z and eps.
  StepLosses critic_step(const torch::Tensor& real, const torch::Tensor& labels);
  // One generator update; returns the generator loss.
  double generator_step(const torch::Tensor& labels);

  // One pass over the shuffled corpus in critic batches; a generator step
  // follows every n_critic critic steps.
  EpochStats run_epoch();

  GanCheckpoint checkpoint() const;
  int epoch() const { return epoch_; }
  const GanConfig& config() const { return cfg_; }
  Generator& generator() { return generator_; }
  Critic& critic() { return critic_; }
  std::vector<FidRecord>& fid_history() { return fid_history_; }

  // Class-proportional labels for n samples following the corpus.
  std::vector<ClassLabel> proportional_labels(int n) const;

 private:
  void init(const GanConfig& cfg);
  torch::Tensor noise(std::int64_t n);

  SpectrogramCorpus corpus_;
  torch::Tensor data_;
  torch::Tensor labels_;
  GanConfig cfg_;
  Generator generator_{nullptr};
  Critic critic_{nullptr};
  std::unique_ptr<torch::optim::Adam> generator_optim_;
  std::unique_ptr<torch::optim::Adam> critic_optim_;
  torch::Generator torch_rng_;
  Rng data_rng_;
  int epoch_ = 0;
  std::int64_t generator_steps_ = 0;
  std::int64_t critic_steps_ = 0;
  std::vector<FidRecord> fid_history_;
};

struct TrainOptions {
  std::optional<GanCheckpoint> resume;
  // JSON-lines FID log; empty disables.
  std::filesystem::path fid_log;
  std::function<void(const EpochStats&)> on_epoch;
};

struct TrainResult {
  GanCheckpoint best;  // minimum FID, or the last state without a reference
  GanCheckpoint last;
  std::vector<EpochStats> history;
};

// Trains on normalized spectrograms covering every class. With a reference,
// FID is computed at epoch 1, every fid_interval epochs and at the final
// epoch on fid_samples class-proportional generated samples.
TrainResult train(const SpectrogramCorpus& corpus, const GanConfig& cfg,
                  const FidReference* fid_ref, const TrainOptions& options = {});

// n normalized spectrograms conditioned on the class.
SpectrogramCorpus sample(const GanCheckpoint& ckpt, ClassLabel label, int n, std::uint64_t seed);

SpectrogramCorpus sample_labels(Generator& generator, const GanConfig& cfg,
                                std::span<const ClassLabel> labels, std::uint64_t seed);

enum class GanStrategy { kDoubled, kBalanced };

// Per-class numbers of samples to add: count(c) for doubled,
// max count - count(c) for balanced.
std::array<int, kNumClasses> synthesis_plan(const std::array<int, kNumClasses>& counts,
                                            GanStrategy strategy);

AugmentedCorpus synthesize_augmentation(const GanCheckpoint& ckpt,
                                        std::span<const Spectrogram> corpus, GanStrategy strategy,
                                        std::uint64_t seed);

}  // namespace clinaug
