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
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <torch/torch.h>

#include <random>

namespace clinaug {
namespace {

using testing::TempDir;

GanConfig tiny_config(std::uint64_t seed = 1) {
  GanConfig cfg;
  cfg.width = 0.125;
  cfg.batch_size = 16;
  cfg.max_epochs = 2;
  cfg.fid_interval = 1;
  cfg.seed = seed;
  return cfg;
}

// Normalized class-dependent random spectrograms.
SpectrogramCorpus tiny_corpus(int per_class = 6) {
  std::mt19937_64 rng(5);
  SpectrogramCorpus out;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < per_class; ++i) {
      auto s = testing::random_spec(rng, class_from_id(c), "clip" + std::to_string(c * 100 + i));
      for (int m = 0; m < 64; ++m) s.at(m, (c * 10) % 64) += 2.0f;
      s.normalized = true;
      out.push_back(s);
    }
  }
  return out;
}

TEST(Networks, ParameterCountsAtFullWidth) {
  GanConfig cfg;
  Generator g(cfg);
  Critic d(cfg);
  EXPECT_EQ(count_parameters(*g), 1526084);
  EXPECT_EQ(count_parameters(*d), 4321153);
}

TEST(Networks, OutputShapesAndFiniteness) {
  torch::manual_seed(0);
  const GanConfig cfg = tiny_config();
  Generator g(cfg);
  Critic d(cfg);
  const auto z = torch::randn({6, cfg.latent_dim});
  const auto y = torch::arange(6, torch::kInt64);
  const auto x = g->forward(z, y);
  EXPECT_EQ(x.sizes(), (std::vector<std::int64_t>{6, 1, 64, 64}));
  EXPECT_TRUE(torch::isfinite(x).all().item<bool>());
  const auto s = d->forward(x, y);
  EXPECT_EQ(s.numel(), 6);
  EXPECT_TRUE(torch::isfinite(s).all().item<bool>());
}

TEST(Interpolate, EndpointsAreBitExact) {
  const auto real = torch::randn({3, 1, 64, 64});
  const auto fake = torch::randn({3, 1, 64, 64});
  EXPECT_TRUE(torch::equal(interpolate(real, fake, torch::ones({3})), real));
  EXPECT_TRUE(torch::equal(interpolate(real, fake, torch::zeros({3})), fake));
  const auto mid = interpolate(torch::zeros({2, 1, 64, 64}), torch::full({2, 1, 64, 64}, 2.0),
                               torch::full({2}, 0.5));
  EXPECT_TRUE(torch::equal(mid, torch::ones({2, 1, 64, 64})));
  EXPECT_THROW(interpolate(real, torch::randn({2, 1, 64, 64}), torch::ones({3})), Error);
}

TEST(GradientPenalty, UnitNormLinearCriticIsZero) {
  auto w = torch::randn({64 * 64});
  w = w / w.norm();
  const CriticFn critic = [&](const torch::Tensor& x, const torch::Tensor&) {
    return x.flatten(1).matmul(w);
  };
  const auto gp = gradient_penalty(critic, torch::randn({4, 1, 64, 64}), torch::zeros({4}, torch::kInt64), 10.0);
  EXPECT_NEAR(gp.item<double>(), 0.0, 1e-5);
}

TEST(GradientPenalty, ScaledCoordinateCritic) {
  const CriticFn critic = [](const torch::Tensor& x, const torch::Tensor&) {
    return 3.0 * x.flatten(1).select(1, 0);
  };
  const auto gp = gradient_penalty(critic, torch::randn({4, 1, 64, 64}), torch::zeros({4}, torch::kInt64), 10.0);
  // 10 * (3 - 1)^2
  EXPECT_NEAR(gp.item<double>(), 40.0, 1e-5);
}

TEST(GradientPenalty, ConstantCritic) {
  const CriticFn critic = [](const torch::Tensor& x, const torch::Tensor&) {
    return torch::full({x.size(0)}, 2.5);
  };
  const auto gp = gradient_penalty(critic, torch::randn({4, 1, 64, 64}), torch::zeros({4}, torch::kInt64), 10.0);
  EXPECT_NEAR(gp.item<double>(), 10.0, 1e-5);
}

TEST(GradientPenalty, DifferentiableInCriticParameters) {
  torch::manual_seed(3);
  Critic d(tiny_config());
  const auto y = torch::zeros({2}, torch::kInt64);
  const auto gp = gradient_penalty([&](const torch::Tensor& x, const torch::Tensor& l) { return d->forward(x, l); },
                                   torch::randn({2, 1, 64, 64}), y, 10.0);
  gp.backward();
  double total = 0.0;
  for (const auto& p : d->parameters()) {
    if (p.grad().defined()) total += p.grad().abs().sum().item<double>();
  }
  EXPECT_GT(total, 0.0);
}

TEST(Losses, CriticLossExamples) {
  const auto f = [](std::vector<float> v) { return torch::tensor(v); };
  EXPECT_FLOAT_EQ(critic_loss(f({5, 1}), f({1, 3}), torch::tensor(0.0f)).item<float>(), -1.0f);
  EXPECT_FLOAT_EQ(critic_loss(f({2, 7}), f({2, 7}), torch::tensor(0.0f)).item<float>(), 0.0f);
  EXPECT_FLOAT_EQ(critic_loss(f({1, 2}), f({2, 1}), torch::tensor(40.0f)).item<float>(), 40.0f);
  // mean(b) - mean(a) + g, exactly.
  const auto a = torch::randn({9}), b = torch::randn({9}), g = torch::rand({});
  EXPECT_TRUE(torch::equal(critic_loss(a, b, g), b.mean() - a.mean() + g));
}

TEST(Losses, GeneratorLossExamples) {
  EXPECT_FLOAT_EQ(generator_loss(torch::tensor({2.0f, 4.0f})).item<float>(), -3.0f);
  EXPECT_FLOAT_EQ(generator_loss(torch::tensor({0.0f})).item<float>(), 0.0f);
  const auto s = torch::randn({7});
  EXPECT_FLOAT_EQ(generator_loss(-s).item<float>(), -generator_loss(s).item<float>());
}

TEST(Training, CriticDescendsOnFixedBatch) {
  torch::manual_seed(11);
  const GanConfig cfg = tiny_config();
  Critic d(cfg);
  const auto real = torch::randn({8, 1, 64, 64}) + 1.0;
  const auto fake = torch::randn({8, 1, 64, 64});
  const auto y = torch::arange(8, torch::kInt64) % 6;
  torch::optim::SGD opt(d->parameters(), torch::optim::SGDOptions(1e-4));
  const auto no_gp = torch::zeros({});
  const auto before = critic_loss(d->forward(real, y), d->forward(fake, y), no_gp);
  opt.zero_grad();
  before.backward();
  opt.step();
  const auto after = critic_loss(d->forward(real, y), d->forward(fake, y), no_gp);
  EXPECT_LT(after.item<double>(), before.item<double>());
}

TEST(Training, SameSeedSameLossCurve) {
  const auto corpus = tiny_corpus();
  GanTrainer a(corpus, tiny_config(4)), b(corpus, tiny_config(4));
  for (int e = 0; e < 2; ++e) {
    const auto sa = a.run_epoch();
    const auto sb = b.run_epoch();
    EXPECT_EQ(sa.critic_loss, sb.critic_loss);
    EXPECT_EQ(sa.generator_loss, sb.generator_loss);
  }
}

TEST(Training, ResumeReproducesTrajectory) {
  TempDir dir("resume");
  const auto corpus = tiny_corpus();
  GanTrainer straight(corpus, tiny_config(6));
  straight.run_epoch();
  const auto reference = straight.run_epoch();

  GanTrainer first(corpus, tiny_config(6));
  first.run_epoch();
  save_checkpoint(dir.path(), first.checkpoint());
  GanTrainer resumed(corpus, load_checkpoint(dir.path()));
  EXPECT_EQ(resumed.epoch(), 1);
  const auto continued = resumed.run_epoch();
  EXPECT_EQ(continued.critic_loss, reference.critic_loss);
  EXPECT_EQ(continued.generator_loss, reference.generator_loss);
}

TEST(Training, MissingClassIsAnError) {
  auto corpus = tiny_corpus();
  std::erase_if(corpus, [](const Spectrogram& s) { return s.label == ClassLabel::kReaming; });
  try {
    GanTrainer t(corpus, tiny_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("Reaming"), std::string::npos);
  }
}

TEST(Training, DivergenceGuardAborts) {
  GanConfig cfg = tiny_config();
  cfg.divergence_limit = 1e-12;
  cfg.divergence_patience = 1;
  EXPECT_THROW(train(tiny_corpus(), cfg, nullptr), Error);
}

TEST(Training, WithoutReferenceBestIsLast) {
  const auto result = train(tiny_corpus(), tiny_config(), nullptr);
  EXPECT_EQ(result.history.size(), 2u);
  EXPECT_EQ(result.best.epoch, 2);
  EXPECT_EQ(result.last.epoch, 2);
  EXPECT_TRUE(result.best.fid_history.empty());
}

TEST(Checkpoint, RestoredGeneratorMatches) {
  TempDir dir("ckpt");
  GanTrainer t(tiny_corpus(), tiny_config(8));
  t.run_epoch();
  const GanCheckpoint ckpt = t.checkpoint();
  save_checkpoint(dir.path(), ckpt, {{"config_hash", "abc"}});
  const GanCheckpoint back = load_checkpoint(dir.path());
  EXPECT_EQ(back.epoch, 1);
  EXPECT_EQ(back.config.seed, 8u);
  const auto a = sample(ckpt, ClassLabel::kInsertion, 3, 5);
  const auto b = sample(back, ClassLabel::kInsertion, 3, 5);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a[i].values, b[i].values);
  EXPECT_THROW(load_checkpoint(dir / "missing"), Error);
}

TEST(Sampling, ClassAndDeterminism) {
  GanTrainer t(tiny_corpus(), tiny_config());
  const GanCheckpoint ckpt = t.checkpoint();
  const auto a = sample(ckpt, ClassLabel::kSawing, 5, 9);
  ASSERT_EQ(a.size(), 5u);
  for (const auto& s : a) {
    EXPECT_EQ(s.label, ClassLabel::kSawing);
    EXPECT_TRUE(s.normalized);
    EXPECT_EQ(s.n_mels, 64);
    EXPECT_EQ(s.n_frames, 64);
  }
  const auto b = sample(ckpt, ClassLabel::kSawing, 5, 9);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a[i].values, b[i].values);
  EXPECT_THROW(sample(ckpt, ClassLabel::kSawing, 0, 9), Error);
}

TEST(Synthesis, PlanArithmetic) {
  const std::array<int, kNumClasses> counts{494, 608, 967, 469, 160, 899};
  EXPECT_EQ(synthesis_plan(counts, GanStrategy::kDoubled), counts);
  const auto balanced = synthesis_plan(counts, GanStrategy::kBalanced);
  for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(counts[c] + balanced[c], 967);
}

TEST(Synthesis, DoubledAndBalancedCorpora) {
  auto corpus = tiny_corpus(4);
  // Make the classes unequal.
  for (int i = 0; i < 3; ++i) corpus.push_back(corpus.front());
  GanTrainer t(corpus, tiny_config());
  const GanCheckpoint ckpt = t.checkpoint();
  const auto before = class_counts(corpus);

  const auto doubled = synthesize_augmentation(ckpt, corpus, GanStrategy::kDoubled, 1);
  const auto after = class_counts(doubled.records);
  for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(after[c], 2 * before[c]);
  EXPECT_EQ(doubled.n_original, corpus.size());

  const auto balanced = synthesize_augmentation(ckpt, corpus, GanStrategy::kBalanced, 1);
  const auto uniform = class_counts(balanced.records);
  for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(uniform[c], 7);

  // Generated records carry only their conditioning class.
  for (std::size_t i = doubled.n_original; i < doubled.records.size(); ++i) {
    const auto& s = doubled.records[i];
    EXPECT_NE(s.clip_id.find(std::string(class_name(s.label))), std::string::npos);
    EXPECT_EQ(s.provenance.strategy, "cwgan_doubled");
  }
}

TEST(GanConfig, JsonAndValidation) {
  const GanConfig cfg = tiny_config();
  EXPECT_EQ(to_json(gan_config_from_json(to_json(cfg))), to_json(cfg));
  EXPECT_THROW(gan_config_from_json({{"n_critic", 0}}), ConfigError);
  EXPECT_THROW(gan_config_from_json({{"lr", "fast"}}), ConfigError);
  EXPECT_THROW(gan_config_from_json({{"learning_rate", 1e-4}}), ConfigError);
}

}  // namespace
}  // namespace clinaug
