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

// Per-location image pools and the seeded random pairing that turns them
// into source/target manifests.
//
// Dataset layout: <root>/<location_id>/<modality>/<file>, modality one of
// rgb, ir, sar, eo. Pairs never cross locations. Each draw is keyed by
// (seed, location_id, draw index), so adding or removing a location leaves
// every other location's records unchanged.

#ifndef IRFORGE_PAIRING_H_
#define IRFORGE_PAIRING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irforge {

enum class Task { kSar2Eo, kSar2Rgb, kRgb2Ir, kSar2Ir };
enum class Modality { kRgb = 0, kIr = 1, kSar = 2, kEo = 3 };

inline constexpr std::array<Task, 4> kAllTasks = {
    Task::kSar2Eo, Task::kSar2Rgb, Task::kRgb2Ir, Task::kSar2Ir};
inline constexpr std::array<Modality, 4> kAllModalities = {
    Modality::kRgb, Modality::kIr, Modality::kSar, Modality::kEo};

// "SAR2EO", "SAR2RGB", "RGB2IR", "SAR2IR".
std::string_view TaskName(Task task);
// Case-insensitive; throws Error(kUnknownTask).
Task ParseTask(std::string_view name);
// Directory name: "rgb", "ir", "sar", "eo".
std::string_view ModalityName(Modality modality);

struct TaskModalities {
  Modality source;
  Modality target;
};
TaskModalities ModalitiesFor(Task task);

struct LocationPool {
  std::string location_id;
  // Sorted image paths, indexed by Modality.
  std::array<std::vector<std::filesystem::path>, 4> images;

  const std::vector<std::filesystem::path>& of(Modality m) const {
    return images[static_cast<std::size_t>(m)];
  }
  std::vector<std::filesystem::path>& of(Modality m) {
    return images[static_cast<std::size_t>(m)];
  }
};

struct ScanResult {
  std::vector<LocationPool> pools;
  std::vector<std::string> warnings;
};

// Enumerates location directories in lexicographic order. Only files with a
// supported image extension are listed. Locations lacking any of `required`
// are reported in `warnings` and skipped. Throws Error(kMissingRoot).
ScanResult ScanLocations(const std::filesystem::path& root,
                         std::span<const Modality> required = {});

struct PairRecord {
  std::string location_id;
  std::filesystem::path source;
  std::filesystem::path target;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct PairManifest {
  Task task = Task::kRgb2Ir;
  std::uint64_t seed = 0;
  std::vector<PairRecord> records;

  friend bool operator==(const PairManifest&, const PairManifest&) = default;
};

// Counter-based generator: a pure function of its three keys.
std::uint64_t KeyedRandom(std::uint64_t seed, std::string_view location_id,
                          std::uint64_t counter);

// Uniform index in [0, bound) from a 64-bit draw (multiply-high).
std::size_t UniformIndex(std::uint64_t draw, std::size_t bound);

// With a count, draws that many (source, target) pairs per location,
// uniformly and independently with replacement. With std::nullopt, pairs
// every source with the target sharing its filename stem. Throws
// Error(kModalityUnavailable) if a pool lacks a task modality and
// Error(kEmptySet) if no record results.
PairManifest SamplePairs(std::span<const LocationPool> pools, Task task,
                         std::optional<std::size_t> pairs_per_location,
                         std::uint64_t seed);

// Header "#irforge-manifest v1 seed=<seed>", then one
// "task\tlocation_id\tsource\ttarget" line per record.
std::string FormatManifest(const PairManifest& manifest);

// Throws Error(kMalformedManifest).
PairManifest ParseManifest(std::string_view text);

}  // namespace irforge

#endif  // IRFORGE_PAIRING_H_
