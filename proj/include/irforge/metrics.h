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

// Translation-quality metrics: pixel L2, a perceptual patch distance over
// feature vectors, the Frechet distance between Gaussian fits of two feature
// populations, and the composite score
//
//   final = (2/pi * atan(fid) + lpips + l2) / 3.

#ifndef IRFORGE_METRICS_H_
#define IRFORGE_METRICS_H_

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "irforge/features.h"
#include "irforge/raster.h"

namespace irforge {

// Mean and covariance of a feature population.
class GaussianStats {
 public:
  // The covariance is symmetrized. Throws Error(kDimensionMismatch) on shape
  // disagreement, Error(kInsufficientSamples) for sample_count < 2,
  // Error(kNonFiniteInput) on NaN/Inf and Error(kNumericalFailure) if an
  // eigenvalue falls below -1e-8 * trace.
  GaussianStats(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                std::size_t sample_count);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  std::size_t sample_count() const { return sample_count_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::size_t sample_count_;
};

// sqrt(sum (a - b)^2) over every sample position. Throws
// Error(kShapeMismatch) unless the rasters have identical shape.
double L2Raw(const Raster& a, const Raster& b);

// L2Raw / (255 * sqrt(width * height * channels)): RMS difference on a
// [0, 1] intensity scale.
double L2Normalized(const Raster& a, const Raster& b);

// Mean over patches of || a_i/|a_i| - b_i/|b_i| ||, zero vectors left as
// zero. Throws Error(kSourceMismatch) for differing source tags and
// Error(kShapeMismatch) for differing patch counts or dims.
double LpipsDistance(const FeatureSet& a, const FeatureSet& b);

// Pools every vector of every set; unbiased (n - 1) covariance.
GaussianStats FitGaussian(std::span<const FeatureSet> sets);

// ||mu_p - mu_q||^2 + tr(S_p + S_q - 2 (S_p^1/2 S_q S_p^1/2)^1/2).
double FrechetDistance(const GaussianStats& p, const GaussianStats& q);

// Throws Error(kNonFiniteInput) for NaN/Inf and Error(kOutOfRange) for
// negative inputs.
double FinalScore(double fid, double lpips, double l2);

// loss_ori + lpips + l2, with the perceptual and pixel terms pre-weighted.
double CombinedLoss(double loss_ori, double lpips, double l2);

struct PerImageScore {
  std::string id;
  double l2 = 0.0;
  double lpips = 0.0;

  friend bool operator==(const PerImageScore&, const PerImageScore&) = default;
};

struct ScoreReport {
  double l2 = 0.0;
  double lpips = 0.0;
  double fid = 0.0;
  double final = 0.0;
  std::vector<PerImageScore> per_image;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

struct ImagePair {
  std::string id;
  Raster generated;
  Raster target;
};

// l2 and lpips are means over pairs (l2 uses L2Normalized); fid compares the
// pooled generated features against the pooled target features. Reductions
// run in list order, so the report does not depend on `workers`.
ScoreReport EvaluateSet(std::span<const ImagePair> pairs,
                        const FeatureExtractor& extractor, int workers = 1);
ScoreReport EvaluateSet(std::span<const ImagePair> pairs,
                        const ExtractorSpec& spec, int workers = 1);

// Same, with features supplied per pair (e.g. loaded from IFF1 files).
ScoreReport EvaluateSetWithFeatures(std::span<const ImagePair> pairs,
                                    std::span<const FeatureSet> generated,
                                    std::span<const FeatureSet> target);

// Key-value text, one `key=value` per line, 12 significant digits.
std::string FormatReport(const ScoreReport& report);

// "%.12g".
std::string FormatMetric(double value);

}  // namespace irforge

#endif  // IRFORGE_METRICS_H_
