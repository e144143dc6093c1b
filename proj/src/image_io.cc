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

#include "irforge/image_io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "irforge/error.h"

namespace irforge {

Raster DecodeImage(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return DecodePnm(bytes);
  }
  if (!bytes.empty() && bytes[0] == 0x89) return DecodePng(bytes);
  throw Error(ErrorCode::kMalformedFile, "unrecognized image signature");
}

Bytes EncodeImage(const Raster& image, ImageFormat format) {
  if (format == ImageFormat::kPng) return EncodePng(image);
  return EncodePnm(image, format);
}

std::optional<ImageFormat> FormatForPath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return ImageFormat::kPng;
  if (ext == ".ppm") return ImageFormat::kPpm;
  if (ext == ".pgm") return ImageFormat::kPgm;
  return std::nullopt;
}

bool IsImagePath(const std::filesystem::path& path) {
  return FormatForPath(path).has_value();
}

Bytes ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Raster ReadImageFile(const std::filesystem::path& path) {
  const Bytes bytes = ReadFileBytes(path);
  try {
    return DecodeImage(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteImageFile(const std::filesystem::path& path, const Raster& image) {
  const auto format = FormatForPath(path);
  if (!format) {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported output extension: " + path.string());
  }
  WriteFileBytes(path, EncodeImage(image, *format));
}

}  // namespace irforge
