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

#include "irforge/translate.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "irforge/error.h"

namespace irforge {

IntensityFactor::IntensityFactor(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "intensity factor must be positive and finite, got " +
                    std::to_string(value));
  }
}

GrayMap ToGrayscale(const Raster& image) {
  if (image.channels() != 3) {
    throw Error(ErrorCode::kChannelMismatch,
                "grayscale conversion needs 3 channels, got " +
                    std::to_string(image.channels()));
  }
  const auto samples = image.samples();
  std::vector<double> values(image.pixel_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = samples[3 * i];
    const double g = samples[3 * i + 1];
    const double b = samples[3 * i + 2];
    const double sum = r + g + b;
    values[i] = sum / 3.0;
  }
  return GrayMap(image.width(), image.height(), std::move(values));
}

GrayMap ReconstructDensity(const GrayMap& gray, IntensityFactor factor) {
  const auto in = gray.values();
  std::vector<double> values(in.size());
  std::transform(in.begin(), in.end(), values.begin(), [&](double v) {
    return std::clamp(v * factor.value(), 0.0, 255.0);
  });
  return GrayMap(gray.width(), gray.height(), std::move(values));
}

Raster RgbToIr(const Raster& image, IntensityFactor factor) {
  return Quantize(ReconstructDensity(ToGrayscale(image), factor));
}

}  // namespace irforge
