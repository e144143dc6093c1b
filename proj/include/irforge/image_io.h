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

// Image codecs: binary PPM (P6), binary PGM (P5) and 8-bit PNG (gray or RGB,
// no alpha, no palette). Decoders validate everything they read and throw
// irforge::Error rather than returning partially decoded data.

#ifndef IRFORGE_IMAGE_IO_H_
#define IRFORGE_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "irforge/raster.h"

namespace irforge {

enum class ImageFormat { kPpm, kPgm, kPng };

using Bytes = std::vector<std::uint8_t>;

// Sniffs the magic bytes and dispatches to the matching decoder.
Raster DecodeImage(std::span<const std::uint8_t> bytes);

// Throws Error(kFormatChannelMismatch) for pgm with 3 channels or ppm with 1.
Bytes EncodeImage(const Raster& image, ImageFormat format);

Raster DecodePnm(std::span<const std::uint8_t> bytes);
Bytes EncodePnm(const Raster& image, ImageFormat format);
Raster DecodePng(std::span<const std::uint8_t> bytes);
Bytes EncodePng(const Raster& image);

// Format implied by the file extension (.png, .ppm, .pgm; case-insensitive).
std::optional<ImageFormat> FormatForPath(const std::filesystem::path& path);

// True if the path carries one of the supported image extensions.
bool IsImagePath(const std::filesystem::path& path);

Bytes ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

Raster ReadImageFile(const std::filesystem::path& path);

// Picks the format from the extension; throws Error(kInvalidArgument) for an
// unknown extension.
void WriteImageFile(const std::filesystem::path& path, const Raster& image);

}  // namespace irforge

#endif  // IRFORGE_IMAGE_IO_H_
