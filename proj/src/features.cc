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

#include "irforge/features.h"

#include <bit>
#include <cmath>
#include <random>
#include <utility>

#include "irforge/error.h"
#include "irforge/summation.h"
#include "irforge/translate.h"

namespace irforge {
namespace {

constexpr char kFeatureMagic[4] = {'I', 'F', 'F', '1'};
constexpr std::size_t kMaxTagLength = 255;

// Uniform double in [-1, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double UnitInterval(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::size_t CoarsestUnit(const ExtractorSpec& spec) {
  return static_cast<std::size_t>(spec.patch_size) << (spec.scales - 1);
}

// One intensity plane in [0, 1].
std::vector<double> IntensityPlane(const Raster& image) {
  std::vector<double> plane(image.pixel_count());
  if (image.channels() == 3) {
    const GrayMap gray = ToGrayscale(image);
    const auto values = gray.values();
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = values[i] / 255.0;
  } else {
    const auto samples = image.samples();
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane[i] = samples[i] / 255.0;
    }
  }
  return plane;
}

// 2x2 box average; width and height must be even.
std::vector<double> Downsample(const std::vector<double>& in, std::size_t width,
                               std::size_t height) {
  const std::size_t ow = width / 2;
  const std::size_t oh = height / 2;
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    const double* r0 = &in[2 * y * width];
    const double* r1 = r0 + width;
    for (std::size_t x = 0; x < ow; ++x) {
      out[y * ow + x] =
          ((r0[2 * x] + r0[2 * x + 1]) + (r1[2 * x] + r1[2 * x + 1])) * 0.25;
    }
  }
  return out;
}

void PutLe64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t GetLe64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

[[noreturn]] void MalformedFeatures(const std::string& what) {
  throw Error(ErrorCode::kMalformedFeatureFile, what);
}

}  // namespace

void ValidateSpec(const ExtractorSpec& spec) {
  if (spec.patch_size < 2 || spec.patch_size > 1024 ||
      !std::has_single_bit(static_cast<unsigned>(spec.patch_size))) {
    throw Error(ErrorCode::kInvalidArgument,
                "patch size must be a power of two in [2, 1024]");
  }
  if (spec.scales < 1 || spec.scales > 16) {
    throw Error(ErrorCode::kInvalidArgument, "scales must be in [1, 16]");
  }
  if (spec.filters_per_scale < 1 || spec.filters_per_scale > 4096) {
    throw Error(ErrorCode::kInvalidArgument,
                "filters per scale must be in [1, 4096]");
  }
}

std::string SourceTag(const ExtractorSpec& spec) {
  return "irforge-rfb/p" + std::to_string(spec.patch_size) + "/s" +
         std::to_string(spec.scales) + "/f" +
         std::to_string(spec.filters_per_scale) +
         "/seed=" + std::to_string(spec.seed);
}

FeatureSet::FeatureSet(std::size_t patch_count, std::size_t dim,
                       std::vector<double> vectors, std::string source_tag)
    : patch_count_(patch_count),
      dim_(dim),
      vectors_(std::move(vectors)),
      source_tag_(std::move(source_tag)) {
  if (patch_count_ == 0 || dim_ == 0 ||
      vectors_.size() / dim_ != patch_count_ ||
      vectors_.size() % dim_ != 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature set must hold patch_count x dim values, both >= 1");
  }
  if (source_tag_.size() > kMaxTagLength) {
    throw Error(ErrorCode::kInvalidArgument, "source tag exceeds 255 bytes");
  }
  for (double v : vectors_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "feature value is not finite");
    }
  }
}

FeatureExtractor::FeatureExtractor(const ExtractorSpec& spec)
    : spec_(spec), tag_(SourceTag(spec)) {
  ValidateSpec(spec_);
  const std::size_t taps = std::size_t(spec_.patch_size) * spec_.patch_size;
  bank_.resize(taps * spec_.filters_per_scale * spec_.scales);
  std::mt19937_64 gen(spec_.seed);
  for (std::size_t f = 0; f < bank_.size() / taps; ++f) {
    const std::span<double> filter(&bank_[f * taps], taps);
    for (double& c : filter) c = UnitInterval(gen);
    const double mean = PairwiseMean(filter);
    double norm2 = 0.0;
    for (double& c : filter) {
      c -= mean;
      norm2 += c * c;
    }
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
      for (double& c : filter) c /= norm;
    }
  }
}

std::span<const double> FeatureExtractor::Filter(int scale, int f) const {
  const std::size_t taps = std::size_t(spec_.patch_size) * spec_.patch_size;
  const std::size_t index = std::size_t(scale) * spec_.filters_per_scale + f;
  return std::span<const double>(bank_).subspan(index * taps, taps);
}

std::size_t FeatureExtractor::PatchCount(std::size_t width,
                                         std::size_t height) const {
  const std::size_t unit = CoarsestUnit(spec_);
  if (width < unit || height < unit) {
    throw Error(ErrorCode::kImageTooSmall,
                std::to_string(width) + "x" + std::to_string(height) +
                    " image is smaller than the coarsest-scale patch (" +
                    std::to_string(unit) + " px)");
  }
  std::size_t tiles_x = width / unit * (unit / spec_.patch_size);
  std::size_t tiles_y = height / unit * (unit / spec_.patch_size);
  std::size_t count = 0;
  for (int s = 0; s < spec_.scales; ++s) {
    count += tiles_x * tiles_y;
    tiles_x /= 2;
    tiles_y /= 2;
  }
  return count;
}

FeatureSet FeatureExtractor::Extract(const Raster& image) const {
  const std::size_t patch_count = PatchCount(image.width(), image.height());
  const std::size_t unit = CoarsestUnit(spec_);
  const std::size_t patch = spec_.patch_size;

  // Center crop to a multiple of the coarsest-scale tile.
  std::size_t width = image.width() / unit * unit;
  std::size_t height = image.height() / unit * unit;
  const std::size_t x0 = (image.width() - width) / 2;
  const std::size_t y0 = (image.height() - height) / 2;
  const std::vector<double> full = IntensityPlane(image);
  std::vector<double> plane(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      plane[y * width + x] = full[(y0 + y) * image.width() + x0 + x];
    }
  }

  const std::size_t dim = spec_.filters_per_scale;
  std::vector<double> vectors;
  vectors.reserve(patch_count * dim);
  std::vector<double> tile(patch * patch);
  for (int s = 0; s < spec_.scales; ++s) {
    if (s > 0) {
      plane = Downsample(plane, width, height);
      width /= 2;
      height /= 2;
    }
    for (std::size_t ty = 0; ty < height / patch; ++ty) {
      for (std::size_t tx = 0; tx < width / patch; ++tx) {
        for (std::size_t y = 0; y < patch; ++y) {
          for (std::size_t x = 0; x < patch; ++x) {
            tile[y * patch + x] =
                plane[(ty * patch + y) * width + tx * patch + x];
          }
        }
        // Centering does not change a zero-sum filter's response; it makes
        // flat tiles produce exactly zero.
        const double mean = PairwiseMean(tile);
        for (double& v : tile) v -= mean;
        for (std::size_t f = 0; f < dim; ++f) {
          const auto coeffs = Filter(s, static_cast<int>(f));
          double response = 0.0;
          for (std::size_t i = 0; i < tile.size(); ++i) {
            response += coeffs[i] * tile[i];
          }
          vectors.push_back(response);
        }
      }
    }
  }
  return FeatureSet(patch_count, dim, std::move(vectors), tag_);
}

FeatureSet ExtractFeatures(const Raster& image, const ExtractorSpec& spec) {
  return FeatureExtractor(spec).Extract(image);
}

Bytes SaveFeatures(const FeatureSet& features) {
  Bytes out(kFeatureMagic, kFeatureMagic + 4);
  const std::string& tag = features.source_tag();
  out.push_back(static_cast<std::uint8_t>(tag.size()));
  out.insert(out.end(), tag.begin(), tag.end());
  PutLe64(out, features.patch_count());
  PutLe64(out, features.dim());
  out.reserve(out.size() + features.vectors().size() * 8);
  for (double v : features.vectors()) PutLe64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

FeatureSet LoadFeatures(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5 || !std::equal(kFeatureMagic, kFeatureMagic + 4,
                                      bytes.begin())) {
    MalformedFeatures("missing IFF1 magic");
  }
  const std::size_t tag_length = bytes[4];
  std::size_t pos = 5;
  if (bytes.size() - pos < tag_length + 16) {
    MalformedFeatures("truncated feature file header");
  }
  std::string tag(bytes.begin() + pos, bytes.begin() + pos + tag_length);
  pos += tag_length;
  const std::uint64_t n = GetLe64(&bytes[pos]);
  const std::uint64_t d = GetLe64(&bytes[pos + 8]);
  pos += 16;
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature file declares an empty matrix");
  }
  const std::size_t payload = bytes.size() - pos;
  if (payload % 8 != 0 || payload / 8 / d != n || (payload / 8) % d != 0) {
    MalformedFeatures("payload length does not match n*d = " +
                      std::to_string(n) + "*" + std::to_string(d));
  }
  std::vector<double> values(payload / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<double>(GetLe64(&bytes[pos + 8 * i]));
    if (!std::isfinite(values[i])) MalformedFeatures("non-finite feature value");
  }
  return FeatureSet(n, d, std::move(values), std::move(tag));
}

}  // namespace irforge
