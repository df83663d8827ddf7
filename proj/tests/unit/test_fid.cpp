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

#include "clinaug/fid.hpp"

#include "clinaug/errors.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <complex>
#include <fstream>
#include <random>

namespace clinaug {
namespace {

GaussianStats stats(Eigen::VectorXd mu, Eigen::MatrixXd cov) {
  GaussianStats s;
  s.mu = std::move(mu);
  s.cov = std::move(cov);
  s.n = 100;
  return s;
}

// Independent route: eigenvalues of the non-symmetric product C_a C_b.
double fid_oracle(const GaussianStats& a, const GaussianStats& b) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a.cov * b.cov);
  std::complex<double> tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::sqrt(es.eigenvalues()(i));
  return (a.mu - b.mu).squaredNorm() + a.cov.trace() + b.cov.trace() - 2.0 * tr.real();
}

Eigen::MatrixXd random_spd(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = n(rng);
  }
  return a * a.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

TEST(GaussianStats, HandComputedExample) {
  Eigen::MatrixXd f(2, 2);
  f << 0, 0, 2, 2;
  const GaussianStats s = gaussian_stats(f);
  EXPECT_DOUBLE_EQ(s.mu(0), 1.0);
  EXPECT_DOUBLE_EQ(s.mu(1), 1.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(s.cov(i, j), 2.0);
  }
  EXPECT_EQ(s.n, 2);
}

TEST(GaussianStats, ConstantFeaturesAndSymmetry) {
  EXPECT_TRUE(gaussian_stats(Eigen::MatrixXd::Constant(5, 3, 4.0)).cov.isZero(0.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd f(50, 8);
  for (int i = 0; i < f.size(); ++i) f.data()[i] = n(rng);
  const auto s = gaussian_stats(f);
  EXPECT_EQ(s.cov, s.cov.transpose());
  EXPECT_THROW(gaussian_stats(Eigen::MatrixXd::Zero(1, 3)), Error);
}

TEST(Fid, IdenticalStatsIsZero) {
  std::mt19937_64 rng(2);
  const auto a = stats(Eigen::VectorXd::Random(6), random_spd(6, rng));
  EXPECT_EQ(frechet_distance(a, a), 0.0);
  const auto i = stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_NEAR(frechet_distance(i, i), 0.0, 1e-6);
}

TEST(Fid, UnitMeanShift) {
  const auto a = stats(Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4));
  const auto b = stats(Eigen::VectorXd::Unit(4, 0), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_NEAR(frechet_distance(a, b), 1.0, 1e-6);
  EXPECT_NEAR(fid_oracle(a, b), 1.0, 1e-12);
}

TEST(Fid, CommutingCovariances) {
  const auto a = stats(Eigen::VectorXd::Zero(2), 4.0 * Eigen::MatrixXd::Identity(2, 2));
  const auto b = stats(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(frechet_distance(a, b), 2.0, 1e-6);
  EXPECT_NEAR(fid_oracle(a, b), 2.0, 1e-12);
}

TEST(Fid, MatchesEigenOracleOnCommutingSpd) {
  // Shared eigenbasis Q with different spectra.
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd base = random_spd(5, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(base);
  const Eigen::MatrixXd q = es.eigenvectors();
  Eigen::VectorXd la(5), lb(5);
  la << 0.5, 1.0, 2.0, 3.0, 7.0;
  lb << 4.0, 0.25, 1.0, 9.0, 0.1;
  const auto a = stats(Eigen::VectorXd::Zero(5), q * la.asDiagonal() * q.transpose());
  const auto b = stats(Eigen::VectorXd::Ones(5), q * lb.asDiagonal() * q.transpose());
  double closed = 5.0;  // ||1||^2
  for (int i = 0; i < 5; ++i) closed += la(i) + lb(i) - 2.0 * std::sqrt(la(i) * lb(i));
  EXPECT_NEAR(frechet_distance(a, b), closed, 1e-6);
  EXPECT_NEAR(fid_oracle(a, b), closed, 1e-6);
}

TEST(Fid, SymmetricAndAgreesWithOracleOnGeneralSpd) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = stats(Eigen::VectorXd::Random(7), random_spd(7, rng));
    const auto b = stats(Eigen::VectorXd::Random(7), random_spd(7, rng));
    EXPECT_NEAR(frechet_distance(a, b), frechet_distance(b, a), 1e-6);
    EXPECT_NEAR(frechet_distance(a, b), fid_oracle(a, b), 1e-6);
    EXPECT_GE(frechet_distance(a, b), 0.0);
  }
}

TEST(Fid, GrowsAsSquaredMeanShift) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd c = random_spd(4, rng);
  const auto a = stats(Eigen::VectorXd::Zero(4), c);
  for (double t : {0.5, 1.0, 3.0}) {
    Eigen::VectorXd mu(4);
    mu << t, -t, 2 * t, 0.0;
    EXPECT_NEAR(frechet_distance(a, stats(mu, c)), mu.squaredNorm(), 1e-6);
  }
}

TEST(Fid, SingularCovariancesAreHandled) {
  // Rank-deficient but PSD: identical constant features give C = 0.
  const auto z = stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3));
  const auto i = stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_NEAR(frechet_distance(z, i), 3.0, 1e-6);
  EXPECT_NEAR(frechet_distance(z, z), 0.0, 1e-9);
}

TEST(Fid, DimensionMismatchIsAnError) {
  const auto a = stats(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  const auto b = stats(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(frechet_distance(a, b), Error);
}

TEST(Fid, SqrtmSquaresBack) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd c = random_spd(6, rng);
  const Eigen::MatrixXd r = sqrtm_psd(c);
  EXPECT_LT((r * r - c).norm(), 1e-9);
}

TEST(Fid, StatsAndLogPersist) {
  testing::TempDir dir("fid");
  std::mt19937_64 rng(7);
  const auto a = stats(Eigen::VectorXd::Random(4), random_spd(4, rng));
  save_gaussian_stats(dir / "s", a);
  const auto b = load_gaussian_stats(dir / "s");
  EXPECT_EQ(b.mu, a.mu);
  EXPECT_EQ(b.cov, a.cov);
  EXPECT_EQ(b.n, a.n);
  append_fid_log(dir / "log.jsonl", 1, 3.5, 10, 12);
  append_fid_log(dir / "log.jsonl", 2, 2.5, 10, 12);
  std::ifstream in(dir / "log.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto doc = nlohmann::json::parse(line);
    EXPECT_EQ(doc.at("epoch").get<int>(), lines + 1);
    ++lines;
  }
  EXPECT_EQ(lines, 2);
}

}  // namespace
}  // namespace clinaug
