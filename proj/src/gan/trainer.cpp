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
#include "clinaug/log.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <cmath>
#include <sstream>

namespace clinaug {

namespace {

constexpr std::uint64_t kDataStream = 0x6461746173747265ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365737472ULL;

template <typename T>
std::string archive_bytes(const T& object) {
  torch::serialize::OutputArchive archive;
  object.save(archive);
  std::ostringstream out;
  archive.save_to(out);
  return out.str();
}

template <typename T>
void restore_bytes(T& object, const std::string& bytes) {
  std::istringstream in(bytes);
  torch::serialize::InputArchive archive;
  archive.load_from(in);
  object.load(archive);
}

void check_corpus(const SpectrogramCorpus& corpus) {
  if (corpus.empty()) throw Error("GAN training corpus is empty");
  const auto counts = class_counts(corpus);
  std::string missing;
  for (ClassLabel c : kAllClasses) {
    if (counts[class_id(c)] == 0) missing += (missing.empty() ? "" : ", ") + std::string(class_name(c));
  }
  if (!missing.empty()) throw Error("GAN training corpus lacks classes: " + missing);
  for (const auto& s : corpus) {
    if (!s.normalized) throw Error("GAN training expects normalized spectrograms");
    if (s.n_mels != 64 || s.n_frames != 64) throw Error("GAN training expects 64x64 spectrograms");
  }
}

}  // namespace

GanTrainer::GanTrainer(SpectrogramCorpus corpus, const GanConfig& cfg)
    : corpus_(std::move(corpus)), data_rng_(cfg.seed ^ kDataStream) {
  init(cfg);
}

GanTrainer::GanTrainer(SpectrogramCorpus corpus, const GanCheckpoint& resume)
    : corpus_(std::move(corpus)), data_rng_(resume.config.seed ^ kDataStream) {
  init(resume.config);
  restore_bytes(*generator_, resume.generator_state);
  restore_bytes(*critic_, resume.critic_state);
  restore_bytes(*generator_optim_, resume.generator_optim_state);
  restore_bytes(*critic_optim_, resume.critic_optim_state);
  {
    const auto& bytes = resume.torch_rng_state;
    auto state = torch::empty({static_cast<std::int64_t>(bytes.size())}, torch::kUInt8);
    std::memcpy(state.data_ptr<std::uint8_t>(), bytes.data(), bytes.size());
    torch_rng_.set_state(state);
  }
  {
    std::istringstream in(resume.data_rng_state);
    in >> data_rng_.engine();
    if (!in) throw Error("corrupt data RNG state in checkpoint");
  }
  epoch_ = resume.epoch;
  generator_steps_ = resume.generator_steps;
  critic_steps_ = resume.critic_steps;
  fid_history_ = resume.fid_history;
}

void GanTrainer::init(const GanConfig& cfg) {
  cfg.validate();
  check_corpus(corpus_);
  cfg_ = cfg;
  data_ = to_tensor(corpus_);
  labels_ = labels_tensor(corpus_);

  // Weight initialization draws from the global generator.
  torch::manual_seed(cfg.seed);
  generator_ = Generator(cfg);
  critic_ = Critic(cfg);
  const auto opts = [&] {
    return torch::optim::AdamOptions(cfg.lr).betas(std::make_tuple(cfg.beta1, cfg.beta2));
  };
  generator_optim_ = std::make_unique<torch::optim::Adam>(generator_->parameters(), opts());
  critic_optim_ = std::make_unique<torch::optim::Adam>(critic_->parameters(), opts());
  torch_rng_ = at::make_generator<at::CPUGeneratorImpl>(cfg.seed ^ kNoiseStream);
}

torch::Tensor GanTrainer::noise(std::int64_t n) {
  return torch::randn({n, cfg_.latent_dim}, torch_rng_, torch::kFloat32);
}

StepLosses GanTrainer::critic_step(const torch::Tensor& real, const torch::Tensor& labels) {
  const auto n = real.size(0);
  torch::Tensor fake;
  {
    torch::NoGradGuard no_grad;
    fake = generator_->forward(noise(n), labels);
  }
  const auto d_real = critic_->forward(real, labels);
  const auto d_fake = critic_->forward(fake, labels);
  torch::Tensor gp = torch::zeros({}, real.options());
  if (cfg_.gp_weight > 0.0) {
    const auto eps = torch::rand({n}, torch_rng_, torch::kFloat32);
    const auto x_hat = interpolate(real, fake, eps);
    gp = gradient_penalty([this](const torch::Tensor& x, const torch::Tensor& y) {
      return critic_->forward(x, y);
    }, x_hat, labels, cfg_.gp_weight);
  }
  const auto loss = critic_loss(d_real, d_fake, gp);
  critic_optim_->zero_grad();
  loss.backward();
  critic_optim_->step();
  ++critic_steps_;

  StepLosses out;
  out.critic_loss = loss.item<double>();
  out.gradient_penalty = gp.item<double>();
  out.wasserstein = (d_real.mean() - d_fake.mean()).item<double>();
  return out;
}

double GanTrainer::generator_step(const torch::Tensor& labels) {
  for (auto& p : critic_->parameters()) p.requires_grad_(false);
  const auto fake = generator_->forward(noise(labels.size(0)), labels);
  const auto loss = generator_loss(critic_->forward(fake, labels));
  generator_optim_->zero_grad();
  loss.backward();
  generator_optim_->step();
  for (auto& p : critic_->parameters()) p.requires_grad_(true);
  ++generator_steps_;
  return loss.item<double>();
}

EpochStats GanTrainer::run_epoch() {
  const auto n = static_cast<std::int64_t>(corpus_.size());
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  data_rng_.shuffle(std::span<std::int64_t>(order));
  const auto perm = torch::tensor(order, torch::kInt64);

  double c_sum = 0.0, gp_sum = 0.0, w_sum = 0.0, g_sum = 0.0;
  int c_count = 0, g_count = 0;
  for (std::int64_t start = 0; start < n; start += cfg_.batch_size) {
    const auto idx = perm.slice(0, start, std::min(n, start + cfg_.batch_size));
    const auto losses = critic_step(data_.index_select(0, idx), labels_.index_select(0, idx));
    c_sum += losses.critic_loss;
    gp_sum += losses.gradient_penalty;
    w_sum += losses.wasserstein;
    ++c_count;
    if (critic_steps_ % cfg_.n_critic == 0) {
      std::vector<std::int64_t> pick(static_cast<std::size_t>(cfg_.batch_size));
      for (auto& p : pick) p = static_cast<std::int64_t>(data_rng_.below(static_cast<std::uint64_t>(n)));
      g_sum += generator_step(labels_.index_select(0, torch::tensor(pick, torch::kInt64)));
      ++g_count;
    }
  }
  ++epoch_;
  EpochStats stats;
  stats.epoch = epoch_;
  stats.critic_loss = c_sum / c_count;
  stats.gradient_penalty = gp_sum / c_count;
  stats.wasserstein = w_sum / c_count;
  stats.generator_loss = g_count > 0 ? g_sum / g_count : 0.0;
  return stats;
}

GanCheckpoint GanTrainer::checkpoint() const {
  GanCheckpoint ckpt;
  ckpt.config = cfg_;
  ckpt.epoch = epoch_;
  ckpt.generator_steps = generator_steps_;
  ckpt.critic_steps = critic_steps_;
  ckpt.generator_state = archive_bytes(*generator_);
  ckpt.critic_state = archive_bytes(*critic_);
  ckpt.generator_optim_state = archive_bytes(*generator_optim_);
  ckpt.critic_optim_state = archive_bytes(*critic_optim_);
  {
    auto state = torch_rng_.get_state();
    ckpt.torch_rng_state.assign(reinterpret_cast<const char*>(state.data_ptr<std::uint8_t>()),
                                static_cast<std::size_t>(state.numel()));
  }
  {
    std::ostringstream out;
    auto engine = data_rng_;
    out << engine.engine();
    ckpt.data_rng_state = out.str();
  }
  ckpt.fid_history = fid_history_;
  return ckpt;
}

std::vector<ClassLabel> GanTrainer::proportional_labels(int n) const {
  const auto counts = class_counts(corpus_);
  const double total = static_cast<double>(corpus_.size());
  std::array<int, kNumClasses> quota{};
  std::array<double, kNumClasses> remainder{};
  int assigned = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const double exact = n * counts[c] / total;
    quota[c] = static_cast<int>(std::floor(exact));
    remainder[c] = exact - quota[c];
    assigned += quota[c];
  }
  // Largest remainder, ties to the lower class id.
  while (assigned < n) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (remainder[c] > remainder[best]) best = c;
    }
    ++quota[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  std::vector<ClassLabel> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < kNumClasses; ++c) labels.insert(labels.end(), quota[c], class_from_id(c));
  return labels;
}

TrainResult train(const SpectrogramCorpus& corpus, const GanConfig& cfg, const FidReference* fid_ref,
                  const TrainOptions& options) {
  cfg.validate();
  GanTrainer trainer = options.resume ? GanTrainer(corpus, *options.resume) : GanTrainer(corpus, cfg);
  TrainResult result;
  std::optional<GanCheckpoint> best;
  double best_fid = 0.0;
  const int n_fid = std::max(2, std::min<int>(cfg.fid_samples, static_cast<int>(corpus.size())));
  int diverging = 0;

  while (trainer.epoch() < cfg.max_epochs) {
    const EpochStats stats = trainer.run_epoch();
    result.history.push_back(stats);
    if (options.on_epoch) options.on_epoch(stats);
    log::debug("gan_epoch", {{"epoch", stats.epoch},
                             {"critic_loss", stats.critic_loss},
                             {"generator_loss", stats.generator_loss},
                             {"gp", stats.gradient_penalty},
                             {"wasserstein", stats.wasserstein}});

    if (!std::isfinite(stats.critic_loss) || !std::isfinite(stats.generator_loss)) {
      throw Error("GAN training produced a non-finite loss at epoch " + std::to_string(stats.epoch));
    }
    diverging = std::abs(stats.critic_loss) > cfg.divergence_limit ? diverging + 1 : 0;
    if (diverging >= cfg.divergence_patience) {
      throw Error("critic loss diverged: |" + std::to_string(stats.critic_loss) + "| > " +
                  std::to_string(cfg.divergence_limit) + " for " + std::to_string(diverging) +
                  " epochs (epoch " + std::to_string(stats.epoch) + ", gp " +
                  std::to_string(stats.gradient_penalty) + ", wasserstein " +
                  std::to_string(stats.wasserstein) + ")");
    }

    const int e = trainer.epoch();
    if (fid_ref && (e == 1 || e % cfg.fid_interval == 0 || e == cfg.max_epochs)) {
      const auto labels = trainer.proportional_labels(n_fid);
      trainer.generator()->eval();
      const auto fake = sample_labels(trainer.generator(), trainer.config(), labels,
                                      derive_seed(cfg.seed, "fid", e));
      trainer.generator()->train();
      const double fid = fid_ref->score(fake);
      if (!std::isfinite(fid)) throw Error("FID is not finite at epoch " + std::to_string(e));
      trainer.fid_history().push_back({e, fid, fid_ref->n_real(), static_cast<std::int64_t>(fake.size())});
      if (!options.fid_log.empty()) append_fid_log(options.fid_log, e, fid, fid_ref->n_real(), fake.size());
      log::info("gan_fid", {{"epoch", e}, {"fid", fid}});
      if (!best || fid < best_fid) {
        best_fid = fid;
        best = trainer.checkpoint();
      }
    }
  }
  result.last = trainer.checkpoint();
  result.best = best ? *best : result.last;
  result.best.fid_history = result.last.fid_history;
  return result;
}

}  // namespace clinaug
