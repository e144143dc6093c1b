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

#include <cstddef>
#include <string>

#include "irforge/error.h"
#include "irforge/image_io.h"

namespace irforge {
namespace {

constexpr std::uint64_t kMaxHeaderValue = 1u << 30;

bool IsPnmSpace(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then parses a decimal number.
  std::uint64_t ReadNumber(const char* what) {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || bytes_[pos_] < '0' || bytes_[pos_] > '9') {
      throw Error(ErrorCode::kMalformedFile,
                  std::string("PNM header: expected ") + what);
    }
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > kMaxHeaderValue) {
        throw Error(ErrorCode::kMalformedFile,
                    std::string("PNM header: ") + what + " too large");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void ConsumeSingleSpace() {
    if (pos_ >= bytes_.size() || !IsPnmSpace(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedFile,
                  "PNM header: missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (IsPnmSpace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' &&
               bytes_[pos_] != '\r') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Raster DecodePnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorCode::kMalformedFile, "not a binary PGM/PPM stream");
  }
  const int channels = bytes[1] == '6' ? 3 : 1;
  HeaderReader reader(bytes);
  const std::uint64_t width = reader.ReadNumber("width");
  const std::uint64_t height = reader.ReadNumber("height");
  const std::uint64_t maxval = reader.ReadNumber("maxval");
  reader.ConsumeSingleSpace();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kMalformedFile, "PNM header: zero dimension");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kUnsupportedDepth,
                "PNM maxval must be 255, got " + std::to_string(maxval));
  }
  const std::size_t begin = reader.position();
  const std::size_t available = bytes.size() - begin;
  // Checked division keeps absurd headers from overflowing the product.
  if (available / channels / width < height) {
    throw Error(ErrorCode::kMalformedFile, "PNM raster data truncated");
  }
  const std::size_t count = width * height * channels;
  return Raster(width, height, channels,
                std::vector<std::uint8_t>(bytes.begin() + begin,
                                          bytes.begin() + begin + count));
}

Bytes EncodePnm(const Raster& image, ImageFormat format) {
  char magic;
  if (format == ImageFormat::kPgm) {
    if (image.channels() != 1) {
      throw Error(ErrorCode::kFormatChannelMismatch,
                  "PGM requires a single-channel raster");
    }
    magic = '5';
  } else if (format == ImageFormat::kPpm) {
    if (image.channels() != 3) {
      throw Error(ErrorCode::kFormatChannelMismatch,
                  "PPM requires a three-channel raster");
    }
    magic = '6';
  } else {
    throw Error(ErrorCode::kInvalidArgument, "EncodePnm called with PNG format");
  }
  const std::string header = std::string("P") + magic + "\n" +
                             std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), image.samples().begin(), image.samples().end());
  return out;
}

}  // namespace irforge
