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

#ifndef IRFORGE_TOOLS_CLI_H_
#define IRFORGE_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "irforge/features.h"

namespace irforge::cli {

// Exit codes. Every invocation ends with one of these.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

// Settings shared by all subcommands. Precedence, lowest first: built-in
// defaults, IRFORGE_WORKERS, the --config file, command-line flags.
struct Config {
  double intensity_rgb2ir = 1.3;
  double intensity_sar2ir = 1.15;
  ExtractorSpec extractor;
  int workers = 1;
  std::uint64_t seed = 0;
};

// Applies `key = value` lines ('#' starts a comment) on top of `config`.
// Recognized keys: intensity_rgb2ir, intensity_sar2ir, workers, seed,
// patch_size, scales, filters_per_scale, extractor_seed. Throws
// irforge::Error(kInvalidArgument) on unknown keys or bad values.
void ApplyConfigText(std::string_view text, Config& config);

// Entry point shared by the binary and the tests. `args` excludes argv[0].
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace irforge::cli

#endif  // IRFORGE_TOOLS_CLI_H_
