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

#include "irforge/pairing.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <system_error>

#include "irforge/error.h"
#include "irforge/image_io.h"

namespace irforge {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kManifestHeader = "#irforge-manifest v1 seed=";

// SplitMix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<fs::path> ListImages(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.empty() || name[0] == '.') continue;
    if (entry.is_regular_file() && IsImagePath(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void CheckField(const std::string& value, const char* what) {
  if (value.find_first_of("\t\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " contains a tab or newline: " + value);
  }
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kSar2Eo: return "SAR2EO";
    case Task::kSar2Rgb: return "SAR2RGB";
    case Task::kRgb2Ir: return "RGB2IR";
    case Task::kSar2Ir: return "SAR2IR";
  }
  return "?";
}

Task ParseTask(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (Task t : kAllTasks) {
    if (TaskName(t) == upper) return t;
  }
  throw Error(ErrorCode::kUnknownTask, "unknown task '" + std::string(name) +
                                           "' (expected SAR2EO, SAR2RGB, "
                                           "RGB2IR or SAR2IR)");
}

std::string_view ModalityName(Modality modality) {
  switch (modality) {
    case Modality::kRgb: return "rgb";
    case Modality::kIr: return "ir";
    case Modality::kSar: return "sar";
    case Modality::kEo: return "eo";
  }
  return "?";
}

TaskModalities ModalitiesFor(Task task) {
  switch (task) {
    case Task::kSar2Eo: return {Modality::kSar, Modality::kEo};
    case Task::kSar2Rgb: return {Modality::kSar, Modality::kRgb};
    case Task::kRgb2Ir: return {Modality::kRgb, Modality::kIr};
    case Task::kSar2Ir: return {Modality::kSar, Modality::kIr};
  }
  throw Error(ErrorCode::kUnknownTask, "unknown task");
}

ScanResult ScanLocations(const fs::path& root,
                         std::span<const Modality> required) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kMissingRoot,
                "dataset root is not a directory: " + root.string());
  }
  std::vector<fs::path> locations;
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && !name.empty() && name[0] != '.') {
      locations.push_back(entry.path());
    }
  }
  std::sort(locations.begin(), locations.end());

  ScanResult result;
  if (locations.empty()) {
    result.warnings.push_back("no location directories under " + root.string());
  }
  for (const fs::path& dir : locations) {
    LocationPool pool;
    pool.location_id = dir.filename().string();
    for (Modality m : kAllModalities) {
      pool.of(m) = ListImages(dir / std::string(ModalityName(m)));
    }
    std::string missing;
    for (Modality m : required) {
      if (pool.of(m).empty()) {
        missing += (missing.empty() ? "" : ", ") + std::string(ModalityName(m));
      }
    }
    if (!missing.empty()) {
      result.warnings.push_back("location " + pool.location_id +
                                " has no " + missing + " images; skipped");
      continue;
    }
    result.pools.push_back(std::move(pool));
  }
  return result;
}

std::uint64_t KeyedRandom(std::uint64_t seed, std::string_view location_id,
                          std::uint64_t counter) {
  std::uint64_t h = Mix(seed);
  h = Mix(h ^ Fnv1a(location_id));
  return Mix(h ^ counter);
}

std::size_t UniformIndex(std::uint64_t draw, std::size_t bound) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(draw) * bound) >> 64);
}

PairManifest SamplePairs(std::span<const LocationPool> pools, Task task,
                         std::optional<std::size_t> pairs_per_location,
                         std::uint64_t seed) {
  if (pairs_per_location && *pairs_per_location == 0) {
    throw Error(ErrorCode::kInvalidArgument, "pairs per location must be >= 1");
  }
  const TaskModalities mods = ModalitiesFor(task);
  PairManifest manifest;
  manifest.task = task;
  manifest.seed = seed;
  for (const LocationPool& pool : pools) {
    const auto& sources = pool.of(mods.source);
    const auto& targets = pool.of(mods.target);
    if (sources.empty() || targets.empty()) {
      throw Error(ErrorCode::kModalityUnavailable,
                  "location " + pool.location_id + " lacks " +
                      std::string(ModalityName(sources.empty() ? mods.source
                                                               : mods.target)) +
                      " images for " + std::string(TaskName(task)));
    }
    if (!pairs_per_location) {
      for (const fs::path& src : sources) {
        const auto match = std::find_if(
            targets.begin(), targets.end(),
            [&](const fs::path& t) { return t.stem() == src.stem(); });
        if (match != targets.end()) {
          manifest.records.push_back({pool.location_id, src, *match});
        }
      }
      continue;
    }
    for (std::size_t i = 0; i < *pairs_per_location; ++i) {
      const std::size_t s =
          UniformIndex(KeyedRandom(seed, pool.location_id, 2 * i),
                       sources.size());
      const std::size_t t =
          UniformIndex(KeyedRandom(seed, pool.location_id, 2 * i + 1),
                       targets.size());
      manifest.records.push_back({pool.location_id, sources[s], targets[t]});
    }
  }
  if (manifest.records.empty()) {
    throw Error(ErrorCode::kEmptySet, "pairing produced no records");
  }
  return manifest;
}

std::string FormatManifest(const PairManifest& manifest) {
  std::string out = std::string(kManifestHeader) + std::to_string(manifest.seed) + "\n";
  const std::string task(TaskName(manifest.task));
  for (const PairRecord& r : manifest.records) {
    const std::string source = r.source.generic_string();
    const std::string target = r.target.generic_string();
    CheckField(r.location_id, "location id");
    CheckField(source, "source path");
    CheckField(target, "target path");
    out += task + "\t" + r.location_id + "\t" + source + "\t" + target + "\n";
  }
  return out;
}

PairManifest ParseManifest(std::string_view text) {
  const auto malformed = [](std::size_t line, const std::string& what) {
    return Error(ErrorCode::kMalformedManifest,
                 "line " + std::to_string(line) + ": " + what);
  };
  PairManifest manifest;
  std::size_t line_no = 0;
  bool have_task = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (!line.starts_with(kManifestHeader)) {
        throw malformed(1, "missing '#irforge-manifest v1' header");
      }
      const std::string_view digits = line.substr(kManifestHeader.size());
      const auto [ptr, ec] = std::from_chars(
          digits.data(), digits.data() + digits.size(), manifest.seed);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw malformed(1, "invalid seed");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 4) throw malformed(line_no, "expected 4 tab-separated fields");
    Task task;
    try {
      task = ParseTask(fields[0]);
    } catch (const Error& e) {
      throw malformed(line_no, e.what());
    }
    if (have_task && task != manifest.task) {
      throw malformed(line_no, "records mix tasks");
    }
    manifest.task = task;
    have_task = true;
    if (fields[1].empty() || fields[2].empty() || fields[3].empty()) {
      throw malformed(line_no, "empty field");
    }
    manifest.records.push_back({std::string(fields[1]), fs::path(fields[2]),
                                fs::path(fields[3])});
  }
  if (line_no == 0) throw malformed(1, "empty manifest");
  if (manifest.records.empty()) throw malformed(line_no, "manifest has no records");
  return manifest;
}

}  // namespace irforge
