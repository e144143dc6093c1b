// Copyright 2026 The irforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Straightforward reference implementations of the metrics, written without
// the library's reductions so they can serve as independent checks.

#ifndef IRFORGE_TESTS_METRICS_ORACLES_H_
#define IRFORGE_TESTS_METRICS_ORACLES_H_

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "irforge/features.h"
#include "irforge/metrics.h"
#include "irforge/raster.h"

namespace irforge::testing {

inline double L2Oracle(const Raster& a, const Raster& b) {
  long double sum = 0;
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const long double d =
            static_cast<long double>(a.at(x, y, c)) - b.at(x, y, c);
        sum += d * d;
      }
    }
  }
  return static_cast<double>(std::sqrt(sum));
}

// Normalize each patch vector, take the Euclidean distance, average.
inline double LpipsOracle(const FeatureSet& a, const FeatureSet& b) {
  long double total = 0;
  for (std::size_t p = 0; p < a.patch_count(); ++p) {
    long double na = 0, nb = 0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      na += static_cast<long double>(a.row(p)[k]) * a.row(p)[k];
      nb += static_cast<long double>(b.row(p)[k]) * b.row(p)[k];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    long double sq = 0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const long double ua = na > 0 ? a.row(p)[k] / na : 0;
      const long double ub = nb > 0 ? b.row(p)[k] / nb : 0;
      sq += (ua - ub) * (ua - ub);
    }
    total += std::sqrt(sq);
  }
  return static_cast<double>(total / a.patch_count());
}

// Textbook two-pass mean and unbiased covariance of rows.
inline void TwoPassMoments(const std::vector<std::vector<double>>& rows,
                           Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  mean = Eigen::VectorXd::Zero(d);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < d; ++k) mean(k) += r[k];
  }
  mean /= static_cast<double>(n);
  cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        cov(i, j) += (r[i] - mean(i)) * (r[j] - mean(j));
      }
    }
  }
  cov /= static_cast<double>(n - 1);
}

// Fréchet distance through the eigenvalues of the non-symmetric product
// Sp*Sq, whose eigenvalues equal those of Sp^1/2 Sq Sp^1/2.
inline double FrechetOracle(const Eigen::VectorXd& mp, const Eigen::MatrixXd& sp,
                            const Eigen::VectorXd& mq, const Eigen::MatrixXd& sq) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(sp * sq);
  double trace_root = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    trace_root += std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  }
  return (mp - mq).squaredNorm() + sp.trace() + sq.trace() - 2 * trace_root;
}

inline Eigen::MatrixXd RandomOrthogonal(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

// Full-rank (well-conditioned) random covariance.
inline Eigen::MatrixXd RandomSpd(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  }
  return a * a.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

// Rank-deficient PSD covariance with the given rank.
inline Eigen::MatrixXd RandomPsd(std::mt19937_64& rng, int d, int rank) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, rank);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = g(rng);
  }
  return a * a.transpose();
}

inline Eigen::VectorXd RandomVector(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

inline FeatureSet RandomFeatureSet(std::mt19937_64& rng, std::size_t n,
                                   std::size_t d, const std::string& tag) {
  std::normal_distribution<double> g;
  std::vector<double> v(n * d);
  for (double& x : v) x = g(rng);
  return FeatureSet(n, d, std::move(v), tag);
}

}  // namespace irforge::testing

#endif  // IRFORGE_TESTS_METRICS_ORACLES_H_
