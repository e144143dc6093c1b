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

// Per-task stage plans and the batch executor that runs them over a
// manifest.
//
//   RGB2IR   grayscale -> density(1.3)
//   SAR2IR   external generator -> grayscale -> density(1.15)
//   SAR2EO   external generator
//   SAR2RGB  external generator
//
// The external generator stage never runs a model: it picks up images that a
// translation network already wrote to a directory, matched by source stem.

#ifndef IRFORGE_PIPELINE_H_
#define IRFORGE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "irforge/features.h"
#include "irforge/metrics.h"
#include "irforge/pairing.h"
#include "irforge/raster.h"
#include "irforge/translate.h"

namespace irforge {

struct ExternalGeneratorStage {
  std::filesystem::path output_dir;  // empty until configured
};
struct GrayscaleStage {};
struct DensityStage {
  IntensityFactor factor;
};
struct EvaluateStage {
  ExtractorSpec spec;
};

using Stage =
    std::variant<ExternalGeneratorStage, GrayscaleStage, DensityStage, EvaluateStage>;

struct TaskPlan {
  Task task = Task::kRgb2Ir;
  std::vector<Stage> stages;

  // Factor of the density stage, if the plan has one.
  std::optional<IntensityFactor> intensity() const;

  template <typename T>
  bool Has() const {
    for (const Stage& s : stages) {
      if (std::holds_alternative<T>(s)) return true;
    }
    return false;
  }
};

// Canonical plan with default intensity factors and no external directory.
TaskPlan PlanFor(Task task);

// Throws Error(kInvalidArgument) if the plan has no density stage.
void SetIntensity(TaskPlan& plan, IntensityFactor factor);
// Throws Error(kInvalidArgument) if the plan has no external stage.
void SetExternalDir(TaskPlan& plan, const std::filesystem::path& dir);
void AddEvaluation(TaskPlan& plan, const ExtractorSpec& spec);

// Checks the stage structure against the task and that every external stage
// has a directory. Throws Error(kInvalidArgument).
void ValidatePlan(const TaskPlan& plan);

// <out_dir>/<location_id>/<source stem>_<task lowercase>.png
std::filesystem::path OutputPathFor(const std::filesystem::path& out_dir,
                                    const PairRecord& record, Task task);

// Locates the pre-generated counterpart of `record.source`:
// <dir>/<location_id>/<stem>.{png,ppm,pgm}, then <dir>/<stem>.{png,ppm,pgm}.
// Throws Error(kMissingExternalOutput).
std::filesystem::path FindExternalOutput(const std::filesystem::path& dir,
                                         const PairRecord& record);

// Runs the translation stages (everything but evaluation) on one record.
Raster TranslateRecord(const TaskPlan& plan, const PairRecord& record);

struct RecordStatus {
  std::size_t index = 0;
  std::string location_id;
  std::filesystem::path source;
  std::filesystem::path output;
  bool ok = false;
  std::string message;
};

struct RunSummary {
  Task task = Task::kRgb2Ir;
  std::size_t record_count = 0;
  std::size_t processed = 0;
  std::size_t failed = 0;
  std::vector<RecordStatus> records;  // manifest order
  std::optional<ScoreReport> score;
  std::string score_error;  // set when evaluation was staged but failed
};

// Processes every record, isolating failures per record, and writes
// <out_dir>/run.log and <out_dir>/summary.txt. Outputs and logs are
// byte-identical for any `workers`.
RunSummary RunPipeline(const TaskPlan& plan, const PairManifest& manifest,
                       const std::filesystem::path& out_dir, int workers = 1);

// Key-value summary (counts, then the score report if any).
std::string FormatRunSummary(const RunSummary& summary);
// One tab-separated line per record: index, ok|failed, location, source,
// output, message.
std::string FormatRunLog(const RunSummary& summary);

}  // namespace irforge

#endif  // IRFORGE_PIPELINE_H_
