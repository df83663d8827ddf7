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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <string>

namespace clinaug {

namespace fs = std::filesystem;

GaussianStats gaussian_stats(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) {
    throw Error("gaussian_stats needs at least 2 samples, got " + std::to_string(features.rows()));
  }
  GaussianStats s;
  s.n = features.rows();
  s.mu = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mu.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(s.n - 1);
  s.cov = 0.5 * (cov + cov.transpose());
  return s;
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()));
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

// Eigenvalues of sqrt(a) b sqrt(a), ascending.
Eigen::VectorXd product_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd root = sqrtm_psd(a);
  const Eigen::MatrixXd m = root * b * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()),
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("matrix square root failed to converge");
  return eig.eigenvalues();
}

bool has_negative_mode(const Eigen::VectorXd& ev) {
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.size() > 0 && ev.minCoeff() < -1e-10 * scale;
}

}  // namespace

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim() != b.dim() || a.cov.rows() != a.dim() || b.cov.rows() != b.dim()) {
    throw Error("FID dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                std::to_string(b.dim()));
  }
  const double mean_term = (a.mu - b.mu).squaredNorm();

  Eigen::MatrixXd ca = a.cov;
  Eigen::MatrixXd cb = b.cov;
  Eigen::VectorXd ev = product_eigenvalues(ca, cb);
  if (has_negative_mode(ev)) {
    const Eigen::MatrixXd jitter = 1e-6 * Eigen::MatrixXd::Identity(a.dim(), a.dim());
    ca += jitter;
    cb += jitter;
    ev = product_eigenvalues(ca, cb);
  }
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] >= 0.0) {
      trace_sqrt += std::sqrt(ev[i]);
    } else if (std::sqrt(-ev[i]) > 1e-3) {
      throw Error("matrix square root has an imaginary component of magnitude " +
                  std::to_string(std::sqrt(-ev[i])));
    }
  }
  double fid = mean_term + ca.trace() + cb.trace() - 2.0 * trace_sqrt;
  if (!std::isfinite(fid)) throw Error("FID is not finite");
  if (fid < 0.0 && fid >= -1e-6) fid = 0.0;
  return fid;
}

void save_gaussian_stats(const fs::path& stem, const GaussianStats& stats) {
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  const fs::path bin(stem.string() + ".bin");
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + bin.string() + "'");
  out.write(reinterpret_cast<const char*>(stats.mu.data()),
            static_cast<std::streamsize>(stats.mu.size() * sizeof(double)));
  // Column-major; symmetric, so the layout is immaterial.
  out.write(reinterpret_cast<const char*>(stats.cov.data()),
            static_cast<std::streamsize>(stats.cov.size() * sizeof(double)));
  std::ofstream js(stem.string() + ".json", std::ios::trunc);
  js << nlohmann::json{{"d", stats.dim()}, {"n", stats.n}}.dump() << '\n';
  if (!out || !js) throw Error("failed writing Gaussian stats '" + stem.string() + "'");
}

GaussianStats load_gaussian_stats(const fs::path& stem) {
  std::ifstream js(stem.string() + ".json");
  if (!js) throw Error("missing '" + stem.string() + ".json'");
  nlohmann::json header;
  js >> header;
  const auto d = header.at("d").get<Eigen::Index>();
  GaussianStats s;
  s.n = header.at("n").get<std::int64_t>();
  s.mu.resize(d);
  s.cov.resize(d, d);
  std::ifstream in(stem.string() + ".bin", std::ios::binary);
  in.read(reinterpret_cast<char*>(s.mu.data()), static_cast<std::streamsize>(d * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.cov.data()),
          static_cast<std::streamsize>(d * d * sizeof(double)));
  if (!in) throw Error("truncated Gaussian stats '" + stem.string() + ".bin'");
  return s;
}

void append_fid_log(const fs::path& path, int epoch, double fid, std::int64_t n_real,
                    std::int64_t n_fake) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot append to '" + path.string() + "'");
  out << nlohmann::json{{"epoch", epoch}, {"fid", fid}, {"n_real", n_real}, {"n_fake", n_fake}}.dump()
      << '\n';
}

}  // namespace clinaug
