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

// Per-patch image features for the perceptual and Frechet metrics.
//
// The built-in extractor is a fixed bank of random zero-mean filters drawn
// once from a seeded generator. Images are reduced to one intensity plane
// (channel mean, scaled to [0, 1]), center-cropped so every scale tiles
// exactly, then downsampled by 2x2 averaging `scales - 1` times. Every
// patch_size x patch_size tile of every scale yields one feature vector of
// `filters_per_scale` responses. Features computed elsewhere (e.g. from a
// pretrained network) can be imported through the IFF1 file format.

#ifndef IRFORGE_FEATURES_H_
#define IRFORGE_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irforge/image_io.h"
#include "irforge/raster.h"

namespace irforge {

inline constexpr std::uint64_t kDefaultExtractorSeed = 0x1f0a9e5d2c4b3a17ull;

struct ExtractorSpec {
  int patch_size = 8;  // power of two, >= 2
  int scales = 3;
  std::uint64_t seed = kDefaultExtractorSeed;
  int filters_per_scale = 16;

  friend bool operator==(const ExtractorSpec&, const ExtractorSpec&) = default;
};

// Throws Error(kInvalidArgument) for out-of-range parameters.
void ValidateSpec(const ExtractorSpec& spec);

// Tag that identifies features produced by the built-in extractor with these
// parameters, e.g. "irforge-rfb/p8/s3/f16/seed=2236...".
std::string SourceTag(const ExtractorSpec& spec);

// patch_count x dim row-major matrix of finite reals plus a provenance tag.
class FeatureSet {
 public:
  // Throws Error(kDimensionMismatch) if patch_count or dim is zero or the
  // vector size disagrees, Error(kNonFiniteInput) on NaN/Inf, and
  // Error(kInvalidArgument) if the tag exceeds 255 bytes.
  FeatureSet(std::size_t patch_count, std::size_t dim,
             std::vector<double> vectors, std::string source_tag);

  std::size_t patch_count() const { return patch_count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> vectors() const { return vectors_; }
  std::span<const double> row(std::size_t patch) const {
    return std::span<const double>(vectors_).subspan(patch * dim_, dim_);
  }
  const std::string& source_tag() const { return source_tag_; }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::size_t patch_count_;
  std::size_t dim_;
  std::vector<double> vectors_;
  std::string source_tag_;
};

// Holds the frozen filter bank for one spec; safe to share across threads.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const ExtractorSpec& spec);

  const ExtractorSpec& spec() const { return spec_; }
  const std::string& source_tag() const { return tag_; }

  // Number of vectors Extract produces for an image of this size; throws
  // Error(kImageTooSmall) if the coarsest scale cannot hold one patch.
  std::size_t PatchCount(std::size_t width, std::size_t height) const;

  FeatureSet Extract(const Raster& image) const;

 private:
  // Coefficients of filter `f` at scale `s`, patch_size^2 values.
  std::span<const double> Filter(int scale, int f) const;

  ExtractorSpec spec_;
  std::string tag_;
  std::vector<double> bank_;
};

FeatureSet ExtractFeatures(const Raster& image, const ExtractorSpec& spec);

// IFF1 format: "IFF1", u8 tag length, tag bytes, u64 n, u64 d, then n*d
// IEEE-754 binary64 values, row-major. All integers and floats little-endian.
Bytes SaveFeatures(const FeatureSet& features);

// Throws Error(kMalformedFeatureFile) on bad magic, truncation, trailing
// bytes or non-finite values and Error(kDimensionMismatch) for n or d = 0.
FeatureSet LoadFeatures(std::span<const std::uint8_t> bytes);

}  // namespace irforge

#endif  // IRFORGE_FEATURES_H_
