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

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>

namespace clinaug {

// Sufficient statistics of a feature distribution for the Frechet distance.
struct GaussianStats {
  Eigen::VectorXd mu;
  Eigen::MatrixXd cov;
  std::int64_t n = 0;

  Eigen::Index dim() const { return mu.size(); }
};

// Column means and unbiased covariance (n - 1 denominator), symmetrized.
// features is n x d with n >= 2.
GaussianStats gaussian_stats(const Eigen::MatrixXd& features);

// Principal square root of a symmetric positive semi-definite matrix via its
// eigendecomposition; negative eigenvalues within round-off are clamped.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a);

// ||mu_a - mu_b||^2 + Tr(C_a + C_b - 2 sqrt(C_a C_b)).
//
// Tr sqrt(C_a C_b) is evaluated as the sum of square roots of the eigenvalues
// of sqrt(C_a) C_b sqrt(C_a), which is similar to C_a C_b but symmetric. A
// clearly negative eigenvalue is the analogue of an imaginary component in
// the general square root: the computation is retried with 1e-6 I added to
// both covariances, remaining negative eigenvalues whose root would exceed
// 1e-3 in magnitude raise clinaug::Error, smaller ones are discarded. Results
// in [-1e-6, 0) are clamped to zero.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

void save_gaussian_stats(const std::filesystem::path& stem, const GaussianStats& stats);
GaussianStats load_gaussian_stats(const std::filesystem::path& stem);

// Appends {"epoch", "fid", "n_real", "n_fake"} as one JSON line.
void append_fid_log(const std::filesystem::path& path, int epoch, double fid,
                    std::int64_t n_real, std::int64_t n_fake);

}  // namespace clinaug
