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

#include "irforge/raster.h"

#include <cmath>
#include <string>
#include <utility>

#include "irforge/error.h"

namespace irforge {

Raster::Raster(std::size_t width, std::size_t height, int channels,
               std::vector<std::uint8_t> samples)
    : width_(width),
      height_(height),
      channels_(channels),
      samples_(std::move(samples)) {
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "raster dimensions must be >= 1");
  }
  if (channels_ != 1 && channels_ != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "raster channel count must be 1 or 3, got " +
                    std::to_string(channels_));
  }
  if (samples_.size() / channels_ / width_ != height_ ||
      samples_.size() != width_ * height_ * channels_) {
    throw Error(ErrorCode::kInvalidArgument,
                "raster sample count does not match width*height*channels");
  }
}

Raster Raster::Filled(std::size_t width, std::size_t height, int channels,
                      std::uint8_t value) {
  return Raster(width, height, channels,
                std::vector<std::uint8_t>(width * height * channels, value));
}

GrayMap::GrayMap(std::size_t width, std::size_t height,
                 std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0 || values_.size() != width_ * height_) {
    throw Error(ErrorCode::kInvalidArgument,
                "gray map value count does not match width*height");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "gray map value is not finite");
    }
  }
}

std::uint8_t QuantizeSample(double value) {
  if (!(value >= 0.0 && value <= 255.0)) {
    throw Error(ErrorCode::kOutOfRange,
                "value " + std::to_string(value) + " outside [0, 255]");
  }
  // std::round breaks ties away from zero.
  return static_cast<std::uint8_t>(std::round(value));
}

Raster Quantize(const GrayMap& gray) {
  std::vector<std::uint8_t> samples;
  samples.reserve(gray.values().size());
  for (double v : gray.values()) samples.push_back(QuantizeSample(v));
  return Raster(gray.width(), gray.height(), 1, std::move(samples));
}

}  // namespace irforge
