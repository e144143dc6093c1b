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

#include "irforge/metrics.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

#include "irforge/error.h"
#include "irforge/parallel.h"
#include "irforge/summation.h"

namespace irforge {
namespace {

constexpr double kEigenTolerance = 1e-8;

void CheckShapes(const Raster& a, const Raster& b) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    "x" + std::to_string(a.channels()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + "x" +
                    std::to_string(b.channels()));
  }
}

// Integer sum of squared sample differences; exact for any realistic size.
std::uint64_t SquaredDifferenceSum(const Raster& a, const Raster& b) {
  CheckShapes(a, b);
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const std::int64_t d = std::int64_t{sa[i]} - std::int64_t{sb[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

// Symmetric eigendecomposition with the small-negative clamp: eigenvalues in
// [-tol, 0) become 0, anything below -tol is a numerical failure.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> CheckedEigen(
    const Eigen::MatrixXd& m, double tolerance, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string(what) + ": eigendecomposition did not converge");
  }
  if (solver.eigenvalues().size() > 0 && solver.eigenvalues().minCoeff() < -tolerance) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string(what) + ": eigenvalue " +
                    std::to_string(solver.eigenvalues().minCoeff()) +
                    " below tolerance");
  }
  return solver;
}

Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, double tolerance) {
  const auto solver = CheckedEigen(m, tolerance, "covariance square root");
  const Eigen::VectorXd roots =
      solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().transpose();
}

void CheckFeatureCompatible(const FeatureSet& a, const FeatureSet& b) {
  if (a.source_tag() != b.source_tag()) {
    throw Error(ErrorCode::kSourceMismatch,
                "'" + a.source_tag() + "' vs '" + b.source_tag() + "'");
  }
  if (a.dim() != b.dim() || a.patch_count() != b.patch_count()) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature sets differ in patch count or dimension");
  }
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

ScoreReport Assemble(std::span<const ImagePair> pairs,
                     std::span<const FeatureSet> generated,
                     std::span<const FeatureSet> target,
                     std::vector<double> l2s, std::vector<double> lpipses) {
  ScoreReport report;
  report.l2 = PairwiseMean(l2s);
  report.lpips = PairwiseMean(lpipses);
  report.fid = FrechetDistance(FitGaussian(generated), FitGaussian(target));
  report.final = FinalScore(report.fid, report.lpips, report.l2);
  report.per_image.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.per_image.push_back({pairs[i].id, l2s[i], lpipses[i]});
  }
  return report;
}

}  // namespace

GaussianStats::GaussianStats(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                             std::size_t sample_count)
    : mean_(std::move(mean)), cov_(std::move(cov)), sample_count_(sample_count) {
  if (mean_.size() == 0 || cov_.rows() != mean_.size() ||
      cov_.cols() != mean_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "covariance must be d x d for a d-vector mean, d >= 1");
  }
  if (sample_count_ < 2) {
    throw Error(ErrorCode::kInsufficientSamples,
                "a Gaussian fit needs at least 2 samples");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw Error(ErrorCode::kNonFiniteInput, "non-finite Gaussian parameters");
  }
  cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
  CheckedEigen(cov_, kEigenTolerance * std::abs(cov_.trace()), "covariance");
}

double L2Raw(const Raster& a, const Raster& b) {
  return std::sqrt(static_cast<double>(SquaredDifferenceSum(a, b)));
}

double L2Normalized(const Raster& a, const Raster& b) {
  const double sum = static_cast<double>(SquaredDifferenceSum(a, b));
  const double count = static_cast<double>(a.samples().size());
  // A single division keeps the black/white extreme at exactly 1.
  return std::sqrt(sum / (255.0 * 255.0 * count));
}

double LpipsDistance(const FeatureSet& a, const FeatureSet& b) {
  CheckFeatureCompatible(a, b);
  std::vector<double> distances(a.patch_count());
  for (std::size_t p = 0; p < a.patch_count(); ++p) {
    const auto ra = a.row(p);
    const auto rb = b.row(p);
    const double na = Norm(ra);
    const double nb = Norm(rb);
    double sq = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const double ua = na > 0.0 ? ra[k] / na : 0.0;
      const double ub = nb > 0.0 ? rb[k] / nb : 0.0;
      sq += (ua - ub) * (ua - ub);
    }
    distances[p] = std::sqrt(sq);
  }
  return PairwiseMean(distances);
}

GaussianStats FitGaussian(std::span<const FeatureSet> sets) {
  if (sets.empty()) {
    throw Error(ErrorCode::kInsufficientSamples, "no feature sets to fit");
  }
  const std::size_t dim = sets.front().dim();
  std::size_t rows = 0;
  for (const FeatureSet& s : sets) {
    if (s.source_tag() != sets.front().source_tag()) {
      throw Error(ErrorCode::kSourceMismatch,
                  "'" + s.source_tag() + "' vs '" +
                      sets.front().source_tag() + "'");
    }
    if (s.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature sets differ in dimension");
    }
    rows += s.patch_count();
  }
  if (rows < 2) {
    throw Error(ErrorCode::kInsufficientSamples,
                "a Gaussian fit needs at least 2 feature vectors");
  }

  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows),
                       static_cast<Eigen::Index>(dim));
  Eigen::Index r = 0;
  for (const FeatureSet& s : sets) {
    for (std::size_t p = 0; p < s.patch_count(); ++p, ++r) {
      const auto row = s.row(p);
      for (std::size_t k = 0; k < dim; ++k) data(r, k) = row[k];
    }
  }
  const Eigen::VectorXd mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered;
  cov /= static_cast<double>(rows - 1);
  return GaussianStats(mean, std::move(cov), rows);
}

double FrechetDistance(const GaussianStats& p, const GaussianStats& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gaussians have dimensions " + std::to_string(p.dim()) +
                    " and " + std::to_string(q.dim()));
  }
  if (p.mean() == q.mean() && p.cov() == q.cov()) return 0.0;

  const double trace_p = p.cov().trace();
  const double trace_q = q.cov().trace();
  const Eigen::MatrixXd root_p =
      PsdSqrt(p.cov(), kEigenTolerance * std::abs(trace_p));
  Eigen::MatrixXd product = root_p * q.cov() * root_p;
  product = (0.5 * (product + product.transpose())).eval();
  // tr(product) can cancel to ~0 when the supports are orthogonal; the
  // floor keeps round-off from being reported as a failure.
  const double scale =
      std::max(std::abs(product.trace()), DBL_EPSILON * trace_p * trace_q);
  const auto solver =
      CheckedEigen(product, kEigenTolerance * scale, "covariance product");
  const double trace_root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double mean_term = (p.mean() - q.mean()).squaredNorm();
  return std::max(0.0, mean_term + trace_p + trace_q - 2.0 * trace_root);
}

double FinalScore(double fid, double lpips, double l2) {
  for (double v : {fid, lpips, l2}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "score component is not finite");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::kOutOfRange, "score component is negative");
    }
  }
  return (2.0 / std::numbers::pi * std::atan(fid) + lpips + l2) / 3.0;
}

double CombinedLoss(double loss_ori, double lpips, double l2) {
  if (!std::isfinite(loss_ori) || !std::isfinite(lpips) || !std::isfinite(l2)) {
    throw Error(ErrorCode::kNonFiniteInput, "loss component is not finite");
  }
  if (lpips < 0.0 || l2 < 0.0) {
    throw Error(ErrorCode::kOutOfRange, "lpips and l2 terms must be >= 0");
  }
  return loss_ori + lpips + l2;
}

ScoreReport EvaluateSet(std::span<const ImagePair> pairs,
                        const FeatureExtractor& extractor, int workers) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptySet, "no image pairs");
  const std::size_t n = pairs.size();
  std::vector<std::optional<FeatureSet>> gen(n);
  std::vector<std::optional<FeatureSet>> tgt(n);
  std::vector<double> l2s(n);
  std::vector<double> lpipses(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    const ImagePair& pair = pairs[i];
    l2s[i] = L2Normalized(pair.generated, pair.target);
    gen[i] = extractor.Extract(pair.generated);
    tgt[i] = extractor.Extract(pair.target);
    lpipses[i] = LpipsDistance(*gen[i], *tgt[i]);
  });
  std::vector<FeatureSet> generated;
  std::vector<FeatureSet> target;
  generated.reserve(n);
  target.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    generated.push_back(std::move(*gen[i]));
    target.push_back(std::move(*tgt[i]));
  }
  return Assemble(pairs, generated, target, std::move(l2s), std::move(lpipses));
}

ScoreReport EvaluateSet(std::span<const ImagePair> pairs,
                        const ExtractorSpec& spec, int workers) {
  return EvaluateSet(pairs, FeatureExtractor(spec), workers);
}

ScoreReport EvaluateSetWithFeatures(std::span<const ImagePair> pairs,
                                    std::span<const FeatureSet> generated,
                                    std::span<const FeatureSet> target) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptySet, "no image pairs");
  if (generated.size() != pairs.size() || target.size() != pairs.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one feature set per image is required");
  }
  std::vector<double> l2s(pairs.size());
  std::vector<double> lpipses(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    l2s[i] = L2Normalized(pairs[i].generated, pairs[i].target);
    lpipses[i] = LpipsDistance(generated[i], target[i]);
  }
  return Assemble(pairs, generated, target, std::move(l2s), std::move(lpipses));
}

std::string FormatMetric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string FormatReport(const ScoreReport& report) {
  std::string out;
  out += "l2=" + FormatMetric(report.l2) + "\n";
  out += "lpips=" + FormatMetric(report.lpips) + "\n";
  out += "fid=" + FormatMetric(report.fid) + "\n";
  out += "final=" + FormatMetric(report.final) + "\n";
  out += "pairs=" + std::to_string(report.per_image.size()) + "\n";
  for (const PerImageScore& s : report.per_image) {
    out += "image=" + s.id + " l2=" + FormatMetric(s.l2) +
           " lpips=" + FormatMetric(s.lpips) + "\n";
  }
  return out;
}

}  // namespace irforge
