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

// Pixel-level RGB -> IR translation: an unweighted channel mean (each
// channel's distance from black) followed by a saturating intensity gain.

#ifndef IRFORGE_TRANSLATE_H_
#define IRFORGE_TRANSLATE_H_

#include "irforge/raster.h"

namespace irforge {

// Positive, finite gain applied by ReconstructDensity.
class IntensityFactor {
 public:
  // Throws Error(kInvalidArgument) unless value > 0 and finite.
  explicit IntensityFactor(double value);

  double value() const { return value_; }

  friend bool operator==(IntensityFactor, IntensityFactor) = default;

 private:
  double value_;
};

// Tuned defaults for the two IR-producing tasks.
inline constexpr double kRgb2IrIntensity = 1.3;
inline constexpr double kSar2IrIntensity = 1.15;

// (R + G + B) / 3 per pixel. Throws Error(kChannelMismatch) unless the
// raster has three channels.
GrayMap ToGrayscale(const Raster& image);

// v -> clamp(v * factor, 0, 255).
GrayMap ReconstructDensity(const GrayMap& gray, IntensityFactor factor);

// Quantize(ReconstructDensity(ToGrayscale(image), factor)); the only
// rounding step is the final quantization.
Raster RgbToIr(const Raster& image, IntensityFactor factor);

}  // namespace irforge

#endif  // IRFORGE_TRANSLATE_H_
