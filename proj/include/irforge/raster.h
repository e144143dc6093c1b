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

#ifndef IRFORGE_RASTER_H_
#define IRFORGE_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace irforge {

// 8-bit image, row-major, channel-interleaved (R,G,B for three channels).
// Immutable once constructed.
class Raster {
 public:
  // Throws Error(kInvalidArgument) unless width, height >= 1, channels is
  // 1 or 3 and samples.size() == width * height * channels.
  Raster(std::size_t width, std::size_t height, int channels,
         std::vector<std::uint8_t> samples);

  // Zero-filled raster.
  static Raster Filled(std::size_t width, std::size_t height, int channels,
                       std::uint8_t value = 0);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return width_ * height_; }
  std::span<const std::uint8_t> samples() const { return samples_; }

  std::uint8_t at(std::size_t x, std::size_t y, int c = 0) const {
    return samples_[(y * width_ + x) * channels_ + c];
  }

  bool SameShape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  int channels_;
  std::vector<std::uint8_t> samples_;
};

// Single-channel floating-point intensities, normally in [0, 255].
class GrayMap {
 public:
  // Throws Error(kInvalidArgument) on size mismatch and
  // Error(kNonFiniteInput) if any value is NaN or infinite.
  GrayMap(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::span<const double> values() const { return values_; }

  double at(std::size_t x, std::size_t y) const {
    return values_[y * width_ + x];
  }

  friend bool operator==(const GrayMap&, const GrayMap&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> values_;
};

// Rounds half away from zero.
std::uint8_t QuantizeSample(double value);

// Converts a GrayMap back to a one-channel Raster. Throws
// Error(kOutOfRange) if any value lies outside [0, 255]; callers clamp first.
Raster Quantize(const GrayMap& gray);

}  // namespace irforge

#endif  // IRFORGE_RASTER_H_
