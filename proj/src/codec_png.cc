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

// PNG reader/writer restricted to 8-bit grayscale and truecolor images.
// zlib supplies deflate and CRC-32; chunk parsing, filtering and Adam7
// de-interlacing live here.

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <string>

#include "irforge/error.h"
#include "irforge/image_io.h"

namespace irforge {
namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G',
                                                     '\r', '\n', 0x1a, '\n'};
constexpr std::uint32_t kMaxChunkLength = 0x7fffffffu;
// Upper bound on the inflated scanline buffer; larger headers are treated as
// corrupt instead of attempting the allocation.
constexpr std::uint64_t kMaxRawBytes = std::uint64_t{1} << 31;

struct Pass {
  std::size_t x0, y0, dx, dy;
};
constexpr std::array<Pass, 7> kAdam7 = {{{0, 0, 8, 8},
                                         {4, 0, 8, 8},
                                         {0, 4, 4, 8},
                                         {2, 0, 4, 4},
                                         {0, 2, 2, 4},
                                         {1, 0, 2, 2},
                                         {0, 1, 1, 2}}};

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedFile, "PNG: " + what);
}

std::uint32_t ReadBe32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void AppendBe32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t Crc(const std::uint8_t* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (size > 0) {
    const uInt step = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, data, step);
    data += step;
    size -= step;
  }
  return static_cast<std::uint32_t>(crc);
}

void AppendChunk(Bytes& out, const char type[4], const Bytes& data) {
  AppendBe32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  AppendBe32(out, Crc(out.data() + type_at, out.size() - type_at));
}

struct Header {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 0;
  bool interlaced = false;
};

Header ParseHeader(const std::uint8_t* data, std::uint32_t length) {
  if (length != 13) Malformed("IHDR length must be 13");
  Header h;
  const std::uint32_t width = ReadBe32(data);
  const std::uint32_t height = ReadBe32(data + 4);
  const int depth = data[8];
  const int color_type = data[9];
  if (width == 0 || height == 0 || width > kMaxChunkLength ||
      height > kMaxChunkLength) {
    Malformed("invalid dimensions");
  }
  if (data[10] != 0) Malformed("unknown compression method");
  if (data[11] != 0) Malformed("unknown filter method");
  if (data[12] > 1) Malformed("unknown interlace method");

  bool valid_depth = false;
  switch (color_type) {
    case 0:
      valid_depth = depth == 1 || depth == 2 || depth == 4 || depth == 8 ||
                    depth == 16;
      break;
    case 3:
      valid_depth = depth == 1 || depth == 2 || depth == 4 || depth == 8;
      break;
    case 2:
    case 4:
    case 6:
      valid_depth = depth == 8 || depth == 16;
      break;
    default:
      Malformed("invalid color type " + std::to_string(color_type));
  }
  if (!valid_depth) Malformed("invalid bit depth for color type");
  if (color_type != 0 && color_type != 2) {
    throw Error(ErrorCode::kUnsupportedColorType,
                "PNG color type " + std::to_string(color_type) +
                    " (palette/alpha) is not supported");
  }
  if (depth != 8) {
    throw Error(ErrorCode::kUnsupportedDepth,
                "PNG bit depth " + std::to_string(depth) + " is not supported");
  }
  h.width = width;
  h.height = height;
  h.channels = color_type == 2 ? 3 : 1;
  h.interlaced = data[12] == 1;
  return h;
}

std::size_t PassExtent(std::size_t size, std::size_t origin,
                       std::size_t step) {
  return size > origin ? (size - origin + step - 1) / step : 0;
}

std::uint64_t RawSize(const Header& h) {
  const auto plane = [&](std::uint64_t w, std::uint64_t rows) {
    return w == 0 || rows == 0 ? 0 : rows * (1 + w * h.channels);
  };
  if (!h.interlaced) return plane(h.width, h.height);
  std::uint64_t total = 0;
  for (const Pass& p : kAdam7) {
    total += plane(PassExtent(h.width, p.x0, p.dx),
                   PassExtent(h.height, p.y0, p.dy));
  }
  return total;
}

Bytes Inflate(const Bytes& compressed, std::size_t expected) {
  Bytes out(std::min<std::size_t>(expected, 1u << 20) + 1);
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib inflateInit failed");
  }
  zs.next_in = const_cast<Bytef*>(compressed.data());
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::size_t produced = 0;
  int rc = Z_OK;
  while (true) {
    if (produced == out.size()) {
      // One spare byte past `expected` detects oversized streams.
      out.resize(std::min<std::size_t>(out.size() * 2, expected + 1));
    }
    zs.next_out = out.data() + produced;
    zs.avail_out = static_cast<uInt>(out.size() - produced);
    rc = inflate(&zs, Z_NO_FLUSH);
    produced = out.size() - zs.avail_out;
    if (rc == Z_STREAM_END) break;
    if (rc == Z_BUF_ERROR) break;
    if (rc != Z_OK) {
      inflateEnd(&zs);
      Malformed("corrupt image data stream");
    }
    if (produced > expected) break;
    if (zs.avail_in == 0 && zs.avail_out != 0) break;
  }
  inflateEnd(&zs);
  if (produced > expected) Malformed("image data longer than expected");
  if (rc != Z_STREAM_END) Malformed("image data stream truncated");
  if (produced != expected) Malformed("image data has unexpected length");
  out.resize(produced);
  return out;
}

std::uint8_t Paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

// Reverses the per-scanline filters of a (sub)image. `raw` points at
// rows * (1 + stride) bytes; the reconstructed rows are written to `rows_out`.
void Unfilter(const std::uint8_t* raw, std::size_t rows, std::size_t stride,
              int bpp, std::vector<std::uint8_t>& rows_out) {
  rows_out.assign(rows * stride, 0);
  for (std::size_t y = 0; y < rows; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    if (filter > 4) Malformed("invalid scanline filter " + std::to_string(filter));
    const std::uint8_t* in = raw + y * (stride + 1) + 1;
    std::uint8_t* cur = rows_out.data() + y * stride;
    const std::uint8_t* prev = y > 0 ? cur - stride : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
      const int b = prev ? prev[i] : 0;
      const int c = prev && i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
      int predictor;
      switch (filter) {
        case 0: predictor = 0; break;
        case 1: predictor = a; break;
        case 2: predictor = b; break;
        case 3: predictor = (a + b) / 2; break;
        default: predictor = Paeth(a, b, c); break;
      }
      cur[i] = static_cast<std::uint8_t>(in[i] + predictor);
    }
  }
}

}  // namespace

Raster DecodePng(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSignature.size() ||
      !std::equal(kSignature.begin(), kSignature.end(), bytes.begin())) {
    Malformed("bad signature");
  }
  std::size_t pos = kSignature.size();
  Header header;
  bool have_header = false;
  bool have_end = false;
  Bytes compressed;
  while (!have_end) {
    if (bytes.size() - pos < 12) Malformed("truncated chunk");
    const std::uint32_t length = ReadBe32(&bytes[pos]);
    if (length > kMaxChunkLength) Malformed("chunk length out of range");
    if (bytes.size() - pos - 12 < length) Malformed("truncated chunk data");
    const std::uint8_t* type = &bytes[pos + 4];
    const std::uint8_t* data = type + 4;
    for (int i = 0; i < 4; ++i) {
      const bool letter = (type[i] >= 'A' && type[i] <= 'Z') ||
                          (type[i] >= 'a' && type[i] <= 'z');
      if (!letter) Malformed("invalid chunk type");
    }
    if (Crc(type, 4 + std::size_t{length}) != ReadBe32(data + length)) {
      Malformed("chunk CRC mismatch");
    }
    const std::string name(type, type + 4);
    if (!have_header) {
      if (name != "IHDR") Malformed("first chunk is not IHDR");
      header = ParseHeader(data, length);
      have_header = true;
    } else if (name == "IHDR") {
      Malformed("duplicate IHDR");
    } else if (name == "IDAT") {
      compressed.insert(compressed.end(), data, data + length);
    } else if (name == "IEND") {
      have_end = true;
    } else if (name == "tRNS") {
      throw Error(ErrorCode::kUnsupportedColorType,
                  "PNG transparency (tRNS) is not supported");
    } else if (name == "PLTE") {
      // A suggested palette is legal for truecolor and carries no pixels.
      if (header.channels != 3) Malformed("PLTE in grayscale image");
    } else if (type[0] >= 'A' && type[0] <= 'Z') {
      Malformed("unknown critical chunk " + name);
    }
    pos += 12 + std::size_t{length};
  }
  if (compressed.empty()) Malformed("no image data");
  if (compressed.size() > kMaxRawBytes) Malformed("image data too large");

  const std::uint64_t raw_size = RawSize(header);
  if (raw_size > kMaxRawBytes) Malformed("image too large");
  const Bytes raw = Inflate(compressed, static_cast<std::size_t>(raw_size));

  const int channels = header.channels;
  std::vector<std::uint8_t> samples;
  if (!header.interlaced) {
    Unfilter(raw.data(), header.height, header.width * channels, channels,
             samples);
  } else {
    samples.assign(header.width * header.height * channels, 0);
    std::size_t offset = 0;
    std::vector<std::uint8_t> pass_rows;
    for (const Pass& p : kAdam7) {
      const std::size_t pw = PassExtent(header.width, p.x0, p.dx);
      const std::size_t ph = PassExtent(header.height, p.y0, p.dy);
      if (pw == 0 || ph == 0) continue;
      const std::size_t stride = pw * channels;
      Unfilter(raw.data() + offset, ph, stride, channels, pass_rows);
      offset += ph * (stride + 1);
      for (std::size_t y = 0; y < ph; ++y) {
        for (std::size_t x = 0; x < pw; ++x) {
          const std::size_t dst =
              ((p.y0 + y * p.dy) * header.width + p.x0 + x * p.dx) * channels;
          std::memcpy(&samples[dst], &pass_rows[y * stride + x * channels],
                      channels);
        }
      }
    }
  }
  return Raster(header.width, header.height, channels, std::move(samples));
}

Bytes EncodePng(const Raster& image) {
  const std::size_t stride = image.width() * image.channels();
  if (image.width() > kMaxChunkLength || image.height() > kMaxChunkLength ||
      (stride + 1) * image.height() > kMaxRawBytes) {
    throw Error(ErrorCode::kInvalidArgument, "image too large for PNG");
  }
  Bytes raw;
  raw.reserve((stride + 1) * image.height());
  const auto samples = image.samples();
  for (std::size_t y = 0; y < image.height(); ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), samples.begin() + y * stride,
               samples.begin() + (y + 1) * stride);
  }
  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  Bytes compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib compression failed");
  }
  compressed.resize(compressed_size);

  Bytes ihdr;
  AppendBe32(ihdr, static_cast<std::uint32_t>(image.width()));
  AppendBe32(ihdr, static_cast<std::uint32_t>(image.height()));
  ihdr.push_back(8);                                 // bit depth
  ihdr.push_back(image.channels() == 3 ? 2 : 0);     // color type
  ihdr.push_back(0);                                 // compression
  ihdr.push_back(0);                                 // filter method
  ihdr.push_back(0);                                 // no interlace

  Bytes out(kSignature.begin(), kSignature.end());
  AppendChunk(out, "IHDR", ihdr);
  AppendChunk(out, "IDAT", compressed);
  AppendChunk(out, "IEND", {});
  return out;
}

}  // namespace irforge
