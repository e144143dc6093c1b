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

#include "irforge/pipeline.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <system_error>
#include <utility>

#include "irforge/error.h"
#include "irforge/image_io.h"
#include "irforge/parallel.h"

namespace irforge {
namespace {

namespace fs = std::filesystem;

constexpr const char* kImageExtensions[] = {".png", ".ppm", ".pgm"};

std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Intermediate value flowing between translation stages.
using Working = std::variant<Raster, GrayMap>;

GrayMap AsGray(const Working& w) {
  if (const auto* gray = std::get_if<GrayMap>(&w)) return *gray;
  const Raster& r = std::get<Raster>(w);
  if (r.channels() != 1) {
    throw Error(ErrorCode::kChannelMismatch,
                "density stage needs a single-channel image");
  }
  std::vector<double> values(r.samples().begin(), r.samples().end());
  return GrayMap(r.width(), r.height(), std::move(values));
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                 text.size()));
}

std::string OneLine(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\t', ' ');
  return text;
}

}  // namespace

std::optional<IntensityFactor> TaskPlan::intensity() const {
  for (const Stage& s : stages) {
    if (const auto* d = std::get_if<DensityStage>(&s)) return d->factor;
  }
  return std::nullopt;
}

TaskPlan PlanFor(Task task) {
  TaskPlan plan;
  plan.task = task;
  switch (task) {
    case Task::kRgb2Ir:
      plan.stages = {GrayscaleStage{},
                     DensityStage{IntensityFactor(kRgb2IrIntensity)}};
      break;
    case Task::kSar2Ir:
      plan.stages = {ExternalGeneratorStage{}, GrayscaleStage{},
                     DensityStage{IntensityFactor(kSar2IrIntensity)}};
      break;
    case Task::kSar2Eo:
    case Task::kSar2Rgb:
      plan.stages = {ExternalGeneratorStage{}};
      break;
  }
  return plan;
}

void SetIntensity(TaskPlan& plan, IntensityFactor factor) {
  for (Stage& s : plan.stages) {
    if (auto* d = std::get_if<DensityStage>(&s)) {
      d->factor = factor;
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(TaskName(plan.task)) + " has no intensity stage");
}

void SetExternalDir(TaskPlan& plan, const fs::path& dir) {
  for (Stage& s : plan.stages) {
    if (auto* e = std::get_if<ExternalGeneratorStage>(&s)) {
      e->output_dir = dir;
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(TaskName(plan.task)) +
                  " does not consume external generator outputs");
}

void AddEvaluation(TaskPlan& plan, const ExtractorSpec& spec) {
  ValidateSpec(spec);
  plan.stages.push_back(EvaluateStage{spec});
}

void ValidatePlan(const TaskPlan& plan) {
  // Translation stages must match the canonical order for the task; an
  // evaluation stage may only come last.
  const TaskPlan canonical = PlanFor(plan.task);
  std::size_t n = plan.stages.size();
  if (n > 0 && std::holds_alternative<EvaluateStage>(plan.stages.back())) --n;
  bool same = n == canonical.stages.size();
  for (std::size_t i = 0; same && i < n; ++i) {
    same = plan.stages[i].index() == canonical.stages[i].index();
  }
  if (!same) {
    throw Error(ErrorCode::kInvalidArgument,
                "stage sequence does not match the " +
                    std::string(TaskName(plan.task)) + " plan");
  }
  for (const Stage& s : plan.stages) {
    if (const auto* e = std::get_if<ExternalGeneratorStage>(&s);
        e && e->output_dir.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(TaskName(plan.task)) +
                      " needs a directory of external generator outputs");
    }
  }
}

fs::path OutputPathFor(const fs::path& out_dir, const PairRecord& record,
                       Task task) {
  return out_dir / record.location_id /
         (record.source.stem().string() + "_" + Lowercase(TaskName(task)) +
          ".png");
}

fs::path FindExternalOutput(const fs::path& dir, const PairRecord& record) {
  const std::string stem = record.source.stem().string();
  std::error_code ec;
  for (const fs::path& base : {dir / record.location_id, dir}) {
    for (const char* ext : kImageExtensions) {
      fs::path candidate = base / (stem + ext);
      if (fs::is_regular_file(candidate, ec)) return candidate;
    }
  }
  throw Error(ErrorCode::kMissingExternalOutput,
              "no generator output for " + record.source.string() + " in " +
                  dir.string());
}

Raster TranslateRecord(const TaskPlan& plan, const PairRecord& record) {
  std::optional<Working> current;
  for (const Stage& stage : plan.stages) {
    if (const auto* ext = std::get_if<ExternalGeneratorStage>(&stage)) {
      current = ReadImageFile(FindExternalOutput(ext->output_dir, record));
      continue;
    }
    if (!current) current = ReadImageFile(record.source);
    if (std::holds_alternative<GrayscaleStage>(stage)) {
      current = ToGrayscale(std::get<Raster>(*current));
    } else if (const auto* d = std::get_if<DensityStage>(&stage)) {
      current = ReconstructDensity(AsGray(*current), d->factor);
    }
  }
  if (!current) current = ReadImageFile(record.source);
  if (const auto* gray = std::get_if<GrayMap>(&*current)) return Quantize(*gray);
  return std::get<Raster>(*current);
}

RunSummary RunPipeline(const TaskPlan& plan, const PairManifest& manifest,
                       const fs::path& out_dir, int workers) {
  ValidatePlan(plan);
  if (manifest.task != plan.task) {
    throw Error(ErrorCode::kInvalidArgument,
                "manifest task " + std::string(TaskName(manifest.task)) +
                    " does not match plan task " +
                    std::string(TaskName(plan.task)));
  }
  const auto& records = manifest.records;
  const std::size_t n = records.size();

  // Sampling with replacement repeats sources; each distinct output is
  // produced once and shared by the records that reference it.
  std::vector<fs::path> outputs(n);
  std::vector<std::size_t> job_of(n);
  std::vector<std::size_t> job_first_record;
  std::map<fs::path, std::size_t> job_index;
  std::vector<std::string> collisions(n);
  for (std::size_t i = 0; i < n; ++i) {
    outputs[i] = OutputPathFor(out_dir, records[i], plan.task);
    auto [it, inserted] = job_index.emplace(outputs[i], job_first_record.size());
    if (inserted) job_first_record.push_back(i);
    job_of[i] = it->second;
    if (records[job_first_record[it->second]].source != records[i].source) {
      collisions[i] = "output name " + outputs[i].generic_string() +
                      " already used by " +
                      records[job_first_record[it->second]].source.generic_string();
    }
  }

  fs::create_directories(out_dir);
  for (const PairRecord& r : records) {
    std::error_code ec;
    fs::create_directories(out_dir / r.location_id, ec);
  }

  std::vector<std::optional<Raster>> results(job_first_record.size());
  std::vector<std::string> job_errors(job_first_record.size());
  ParallelFor(job_first_record.size(), workers, [&](std::size_t j) {
    const std::size_t i = job_first_record[j];
    try {
      Raster out = TranslateRecord(plan, records[i]);
      WriteImageFile(outputs[i], out);
      results[j] = std::move(out);
    } catch (const std::exception& e) {
      job_errors[j] = OneLine(e.what());
    }
  });

  const EvaluateStage* evaluate = nullptr;
  for (const Stage& s : plan.stages) {
    if (const auto* e = std::get_if<EvaluateStage>(&s)) evaluate = e;
  }
  std::optional<FeatureExtractor> extractor;
  if (evaluate) extractor.emplace(evaluate->spec);

  RunSummary summary;
  summary.task = plan.task;
  summary.record_count = n;
  summary.records.resize(n);
  std::vector<std::optional<Raster>> targets(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    RecordStatus& status = summary.records[i];
    status.index = i;
    status.location_id = records[i].location_id;
    status.source = records[i].source;
    status.output = outputs[i];
    const std::size_t j = job_of[i];
    if (!collisions[i].empty()) {
      status.message = collisions[i];
      return;
    }
    if (!results[j]) {
      status.message = job_errors[j];
      return;
    }
    if (evaluate) {
      try {
        Raster target = ReadImageFile(records[i].target);
        if (!target.SameShape(*results[j])) {
          throw Error(ErrorCode::kShapeMismatch,
                      "generated and target images differ in shape");
        }
        extractor->PatchCount(target.width(), target.height());
        targets[i] = std::move(target);
      } catch (const std::exception& e) {
        status.message = OneLine(e.what());
        return;
      }
    }
    status.ok = true;
  });

  std::vector<ImagePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    if (summary.records[i].ok) {
      ++summary.processed;
      if (evaluate) {
        pairs.push_back({std::to_string(i) + ":" + records[i].location_id +
                             "/" + records[i].source.stem().string(),
                         *results[job_of[i]], std::move(*targets[i])});
      }
    } else {
      ++summary.failed;
    }
  }
  if (evaluate && !pairs.empty()) {
    try {
      summary.score = EvaluateSet(pairs, *extractor, workers);
    } catch (const std::exception& e) {
      summary.score_error = OneLine(e.what());
    }
  } else if (evaluate) {
    summary.score_error = "no successfully processed records to evaluate";
  }

  WriteTextFile(out_dir / "run.log", FormatRunLog(summary));
  WriteTextFile(out_dir / "summary.txt", FormatRunSummary(summary));
  return summary;
}

std::string FormatRunSummary(const RunSummary& summary) {
  std::string out;
  out += "task=" + std::string(TaskName(summary.task)) + "\n";
  out += "records=" + std::to_string(summary.record_count) + "\n";
  out += "processed=" + std::to_string(summary.processed) + "\n";
  out += "failed=" + std::to_string(summary.failed) + "\n";
  if (!summary.score_error.empty()) {
    out += "score_error=" + summary.score_error + "\n";
  }
  if (summary.score) out += FormatReport(*summary.score);
  return out;
}

std::string FormatRunLog(const RunSummary& summary) {
  std::string out;
  for (const RecordStatus& r : summary.records) {
    out += std::to_string(r.index) + "\t" + (r.ok ? "ok" : "failed") + "\t" +
           r.location_id + "\t" + r.source.generic_string() + "\t" +
           r.output.generic_string() + "\t" + r.message + "\n";
  }
  return out;
}

}  // namespace irforge
