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

#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

#include "irforge/error.h"
#include "irforge/features.h"
#include "irforge/image_io.h"
#include "irforge/metrics.h"
#include "irforge/pairing.h"
#include "irforge/parallel.h"
#include "irforge/pipeline.h"
#include "irforge/translate.h"

namespace irforge::cli {
namespace {

namespace fs = std::filesystem;

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T parsed{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config: invalid value for " + key + ": '" + value + "'");
  }
  return parsed;
}

double ParseReal(const std::string& key, const std::string& value) {
  // from_chars for double is missing from older libstdc++.
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config: invalid value for " + key + ": '" + value + "'");
  }
  return v;
}

void ValidateConfig(const Config& config) {
  IntensityFactor{config.intensity_rgb2ir};
  IntensityFactor{config.intensity_sar2ir};
  if (config.workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  }
  ValidateSpec(config.extractor);
}

// Writes diagnostics as whole lines so concurrent producers never
// interleave within a line.
void Diag(std::ostream& err, const std::string& kind, const std::string& msg) {
  err << (kind + ": " + msg + "\n") << std::flush;
}

std::vector<fs::path> ListImageFiles(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && IsImagePath(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void WriteText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                 text.size()));
}

std::string ReadText(const fs::path& path) {
  const Bytes bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

// Options every subcommand that extracts features accepts.
struct ExtractorFlags {
  CLI::Option* patch_size = nullptr;
  CLI::Option* scales = nullptr;
  CLI::Option* filters = nullptr;
  CLI::Option* seed = nullptr;
  int patch_size_value = 0;
  int scales_value = 0;
  int filters_value = 0;
  std::uint64_t seed_value = 0;

  void Register(CLI::App* app) {
    patch_size = app->add_option("--patch-size", patch_size_value,
                                 "Feature patch size in pixels (power of two)");
    scales = app->add_option("--scales", scales_value,
                             "Number of feature pyramid scales");
    filters = app->add_option("--filters", filters_value,
                              "Filters per scale (feature dimension)");
    seed = app->add_option("--extractor-seed", seed_value,
                           "Seed of the feature filter bank");
  }

  void Apply(ExtractorSpec& spec) const {
    if (patch_size->count()) spec.patch_size = patch_size_value;
    if (scales->count()) spec.scales = scales_value;
    if (filters->count()) spec.filters_per_scale = filters_value;
    if (seed->count()) spec.seed = seed_value;
    ValidateSpec(spec);
  }
};

nlohmann::json ReportJson(const ScoreReport& report) {
  nlohmann::json per_image = nlohmann::json::array();
  for (const PerImageScore& s : report.per_image) {
    per_image.push_back({{"id", s.id}, {"l2", s.l2}, {"lpips", s.lpips}});
  }
  return {{"l2", report.l2},
          {"lpips", report.lpips},
          {"fid", report.fid},
          {"final", report.final},
          {"pairs", report.per_image.size()},
          {"per_image", per_image}};
}

// ---------------------------------------------------------------------------
// translate

struct TranslateArgs {
  std::string task;
  fs::path in;
  fs::path out;
  CLI::Option* factor = nullptr;
  double factor_value = 0.0;
  CLI::Option* workers = nullptr;
  int workers_value = 1;
};

Raster ApplyTranslation(const std::string& task, const Raster& image,
                        IntensityFactor factor) {
  if (task == "rgb2ir") return RgbToIr(image, factor);
  if (task == "gray") return Quantize(ToGrayscale(image));
  // density
  if (image.channels() != 1) {
    throw Error(ErrorCode::kChannelMismatch,
                "density adjustment needs a single-channel image");
  }
  std::vector<double> values(image.samples().begin(), image.samples().end());
  return Quantize(ReconstructDensity(
      GrayMap(image.width(), image.height(), std::move(values)), factor));
}

int CmdTranslate(const TranslateArgs& args, const Config& config,
                 std::ostream& out, std::ostream& err) {
  if (args.task == "gray" && args.factor->count()) {
    Diag(err, "error", "--factor does not apply to --task gray");
    return kExitUsage;
  }
  const IntensityFactor factor(args.factor->count() ? args.factor_value
                                                    : config.intensity_rgb2ir);
  const int workers = args.workers->count() ? args.workers_value : config.workers;

  std::vector<std::pair<fs::path, fs::path>> jobs;
  std::error_code ec;
  if (fs::is_directory(args.in, ec)) {
    if (fs::exists(args.out, ec) && !fs::is_directory(args.out, ec)) {
      Diag(err, "error", "--out must be a directory when --in is a directory");
      return kExitUsage;
    }
    fs::create_directories(args.out);
    for (const fs::path& file : ListImageFiles(args.in)) {
      jobs.emplace_back(file, args.out / (file.stem().string() + ".png"));
    }
    if (jobs.empty()) {
      Diag(err, "error", "no images found in " + args.in.string());
      return kExitUsage;
    }
  } else if (fs::is_regular_file(args.in, ec)) {
    fs::path target = args.out;
    if (fs::is_directory(target, ec)) {
      target /= args.in.stem().string() + ".png";
    } else if (!FormatForPath(target)) {
      Diag(err, "error", "unsupported output extension: " + target.string());
      return kExitUsage;
    }
    jobs.emplace_back(args.in, target);
  } else {
    Diag(err, "error", "input not found: " + args.in.string());
    return kExitUsage;
  }

  std::vector<std::string> failures(jobs.size());
  ParallelFor(jobs.size(), workers, [&](std::size_t i) {
    try {
      const Raster image = ReadImageFile(jobs[i].first);
      WriteImageFile(jobs[i].second, ApplyTranslation(args.task, image, factor));
    } catch (const std::exception& e) {
      failures[i] = jobs[i].first.string() + ": " + e.what();
    }
  });
  std::size_t failed = 0;
  for (const std::string& f : failures) {
    if (!f.empty()) {
      Diag(err, "error", f);
      ++failed;
    }
  }
  out << "translated=" << jobs.size() - failed << "\nfailed=" << failed << "\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------------------
// pair

struct PairArgs {
  fs::path root;
  std::string task;
  std::string per_location;
  CLI::Option* seed = nullptr;
  std::uint64_t seed_value = 0;
  fs::path out;
};

int CmdPair(const PairArgs& args, const Config& config, std::ostream& out,
            std::ostream& err) {
  const Task task = ParseTask(args.task);
  std::optional<std::size_t> per_location;
  if (args.per_location != "all") {
    std::size_t n = 0;
    const auto& s = args.per_location;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
      Diag(err, "error", "--per-location must be a positive integer or 'all'");
      return kExitUsage;
    }
    per_location = n;
  }
  const std::uint64_t seed = args.seed->count() ? args.seed_value : config.seed;
  const TaskModalities mods = ModalitiesFor(task);
  const Modality required[] = {mods.source, mods.target};
  const ScanResult scan = ScanLocations(args.root, required);
  for (const std::string& w : scan.warnings) Diag(err, "warning", w);
  const PairManifest manifest =
      SamplePairs(scan.pools, task, per_location, seed);
  WriteText(args.out, FormatManifest(manifest));
  out << "locations=" << scan.pools.size()
      << "\nrecords=" << manifest.records.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string task;
  fs::path manifest;
  fs::path out;
  CLI::Option* external = nullptr;
  fs::path external_value;
  CLI::Option* factor = nullptr;
  double factor_value = 0.0;
  CLI::Option* workers = nullptr;
  int workers_value = 1;
  bool evaluate = false;
  ExtractorFlags extractor;
};

int CmdRun(const RunArgs& args, const Config& config, std::ostream& out,
           std::ostream& err) {
  const Task task = ParseTask(args.task);
  TaskPlan plan = PlanFor(task);
  if (plan.intensity()) {
    const double configured = task == Task::kRgb2Ir ? config.intensity_rgb2ir
                                                    : config.intensity_sar2ir;
    SetIntensity(plan, IntensityFactor(args.factor->count() ? args.factor_value
                                                            : configured));
  } else if (args.factor->count()) {
    Diag(err, "error", "--factor does not apply to " + std::string(TaskName(task)));
    return kExitUsage;
  }
  if (args.external->count()) SetExternalDir(plan, args.external_value);
  if (args.evaluate) {
    ExtractorSpec spec = config.extractor;
    args.extractor.Apply(spec);
    AddEvaluation(plan, spec);
  }
  ValidatePlan(plan);

  const PairManifest manifest = ParseManifest(ReadText(args.manifest));
  const int workers = args.workers->count() ? args.workers_value : config.workers;
  const RunSummary summary = RunPipeline(plan, manifest, args.out, workers);
  for (const RecordStatus& r : summary.records) {
    if (!r.ok) {
      Diag(err, "error",
           "record " + std::to_string(r.index) + " (" + r.source.string() +
               "): " + r.message);
    }
  }
  if (!summary.score_error.empty()) {
    Diag(err, "error", "evaluation: " + summary.score_error);
  }
  out << FormatRunSummary(summary);
  const bool complete = summary.failed == 0 && summary.score_error.empty();
  return complete ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  fs::path generated;
  fs::path target;
  CLI::Option* features = nullptr;
  fs::path features_value;
  CLI::Option* report = nullptr;
  fs::path report_value;
  CLI::Option* json = nullptr;
  fs::path json_value;
  CLI::Option* workers = nullptr;
  int workers_value = 1;
  ExtractorFlags extractor;
};

// First file per stem in sorted order; later duplicates are reported.
std::map<std::string, fs::path> IndexByStem(const fs::path& dir,
                                            std::ostream& err) {
  std::map<std::string, fs::path> index;
  for (const fs::path& file : ListImageFiles(dir)) {
    const auto [it, inserted] = index.emplace(file.stem().string(), file);
    if (!inserted) {
      Diag(err, "warning", "ignoring " + file.string() + " (stem already used by " +
                               it->second.string() + ")");
    }
  }
  return index;
}

int CmdScore(const ScoreArgs& args, const Config& config, std::ostream& out,
             std::ostream& err) {
  for (const fs::path& dir : {args.generated, args.target}) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
      Diag(err, "error", "not a directory: " + dir.string());
      return kExitUsage;
    }
  }
  ExtractorSpec spec = config.extractor;
  args.extractor.Apply(spec);
  const FeatureExtractor extractor(spec);
  const bool imported = args.features->count() > 0;
  const int workers = args.workers->count() ? args.workers_value : config.workers;

  const auto generated = IndexByStem(args.generated, err);
  const auto target = IndexByStem(args.target, err);
  std::vector<std::string> stems;
  for (const auto& [stem, path] : generated) {
    if (target.count(stem)) {
      stems.push_back(stem);
    } else {
      Diag(err, "warning", "no target for generated image " + path.string());
    }
  }
  for (const auto& [stem, path] : target) {
    if (!generated.count(stem)) {
      Diag(err, "warning", "no generated image for target " + path.string());
    }
  }
  if (stems.empty()) {
    Diag(err, "error", "no generated/target images share a filename stem");
    return kExitUsage;
  }

  struct Loaded {
    std::optional<ImagePair> pair;
    std::optional<FeatureSet> gen_features;
    std::optional<FeatureSet> tgt_features;
    std::string error;
  };
  std::vector<Loaded> loaded(stems.size());
  ParallelFor(stems.size(), workers, [&](std::size_t i) {
    const std::string& stem = stems[i];
    try {
      ImagePair pair{stem, ReadImageFile(generated.at(stem)),
                     ReadImageFile(target.at(stem))};
      if (!pair.generated.SameShape(pair.target)) {
        throw Error(ErrorCode::kShapeMismatch,
                    "generated and target images differ in shape");
      }
      if (imported) {
        const fs::path dir = args.features_value;
        loaded[i].gen_features = LoadFeatures(
            ReadFileBytes(dir / "generated" / (stem + ".iff")));
        loaded[i].tgt_features =
            LoadFeatures(ReadFileBytes(dir / "target" / (stem + ".iff")));
      } else {
        extractor.PatchCount(pair.generated.width(), pair.generated.height());
      }
      loaded[i].pair = std::move(pair);
    } catch (const std::exception& e) {
      loaded[i].error = stem + ": " + e.what();
    }
  });

  std::vector<ImagePair> pairs;
  std::vector<FeatureSet> gen_features;
  std::vector<FeatureSet> tgt_features;
  std::size_t failed = 0;
  for (Loaded& l : loaded) {
    if (!l.pair) {
      Diag(err, "error", l.error);
      ++failed;
      continue;
    }
    pairs.push_back(std::move(*l.pair));
    if (imported) {
      gen_features.push_back(std::move(*l.gen_features));
      tgt_features.push_back(std::move(*l.tgt_features));
    }
  }
  if (pairs.empty()) {
    Diag(err, "error", "no pair could be loaded");
    return kExitUsage;
  }
  const ScoreReport report =
      imported ? EvaluateSetWithFeatures(pairs, gen_features, tgt_features)
               : EvaluateSet(pairs, extractor, workers);
  const std::string text = FormatReport(report);
  out << text;
  if (args.report->count()) WriteText(args.report_value, text);
  if (args.json->count()) {
    WriteText(args.json_value, ReportJson(report).dump(2) + "\n");
  }
  return failed == 0 ? kExitOk : kExitPartial;
}

}  // namespace

void ApplyConfigText(std::string_view text, Config& config) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (key == "intensity_rgb2ir") {
      config.intensity_rgb2ir = ParseReal(key, value);
    } else if (key == "intensity_sar2ir") {
      config.intensity_sar2ir = ParseReal(key, value);
    } else if (key == "workers") {
      config.workers = ParseNumber<int>(key, value);
    } else if (key == "seed") {
      config.seed = ParseNumber<std::uint64_t>(key, value);
    } else if (key == "patch_size") {
      config.extractor.patch_size = ParseNumber<int>(key, value);
    } else if (key == "scales") {
      config.extractor.scales = ParseNumber<int>(key, value);
    } else if (key == "filters_per_scale") {
      config.extractor.filters_per_scale = ParseNumber<int>(key, value);
    } else if (key == "extractor_seed") {
      config.extractor.seed = ParseNumber<std::uint64_t>(key, value);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "config: unknown key '" + key + "'");
    }
  }
  ValidateConfig(config);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Pixel-level RGB/SAR to IR translation and translation-quality "
               "scoring.",
               "irforge");
  app.require_subcommand(1);
  fs::path config_path;
  CLI::Option* config_opt =
      app.add_option("--config", config_path, "key=value settings file")
          ->check(CLI::ExistingFile);

  TranslateArgs tr;
  CLI::App* translate =
      app.add_subcommand("translate", "Grayscale conversion and intensity adjustment");
  translate->add_option("--task", tr.task, "rgb2ir, gray or density")
      ->required()
      ->check(CLI::IsMember({"rgb2ir", "gray", "density"}));
  translate->add_option("--in", tr.in, "Input image or directory")->required();
  translate->add_option("--out", tr.out, "Output image or directory")->required();
  tr.factor = translate->add_option("--factor", tr.factor_value,
                                    "Intensity factor (default 1.3)");
  tr.workers = translate->add_option("--workers", tr.workers_value,
                                     "Parallel workers")
                   ->check(CLI::PositiveNumber);

  PairArgs pa;
  CLI::App* pair = app.add_subcommand("pair", "Sample a source/target pair manifest");
  pair->add_option("--root", pa.root, "Dataset root (<root>/<location>/<modality>/)")
      ->required();
  pair->add_option("--task", pa.task, "SAR2EO, SAR2RGB, RGB2IR or SAR2IR")->required();
  pair->add_option("--per-location", pa.per_location,
                   "Pairs drawn per location, or 'all' for stem-aligned pairs")
      ->required();
  pa.seed = pair->add_option("--seed", pa.seed_value, "Sampling seed");
  pair->add_option("--out", pa.out, "Manifest file to write")->required();

  RunArgs ra;
  CLI::App* run = app.add_subcommand("run", "Run a task pipeline over a manifest");
  run->add_option("--task", ra.task, "SAR2EO, SAR2RGB, RGB2IR or SAR2IR")->required();
  run->add_option("--manifest", ra.manifest, "Pair manifest")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", ra.out, "Output directory")->required();
  ra.external = run->add_option("--external", ra.external_value,
                                "Directory of external generator outputs");
  ra.factor = run->add_option("--factor", ra.factor_value,
                              "Intensity factor override");
  ra.workers = run->add_option("--workers", ra.workers_value, "Parallel workers")
                   ->check(CLI::PositiveNumber);
  run->add_flag("--evaluate", ra.evaluate, "Score outputs against manifest targets");
  ra.extractor.Register(run);

  ScoreArgs sa;
  CLI::App* score = app.add_subcommand("score", "Score generated images against targets");
  score->add_option("--generated", sa.generated, "Generated image directory")->required();
  score->add_option("--target", sa.target, "Target image directory")->required();
  sa.features = score->add_option(
      "--features", sa.features_value,
      "Directory with generated/<stem>.iff and target/<stem>.iff features");
  sa.report = score->add_option("--report", sa.report_value,
                                "Write the key=value report here");
  sa.json = score->add_option("--json", sa.json_value, "Write a JSON report here");
  sa.workers = score->add_option("--workers", sa.workers_value, "Parallel workers")
                   ->check(CLI::PositiveNumber);
  sa.extractor.Register(score);

  std::vector<const char*> argv = {"irforge"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    Config config;
    if (const char* env = std::getenv("IRFORGE_WORKERS"); env && *env) {
      config.workers = ParseNumber<int>("IRFORGE_WORKERS", env);
    }
    if (config_opt->count()) ApplyConfigText(ReadText(config_path), config);
    ValidateConfig(config);

    if (translate->parsed()) return CmdTranslate(tr, config, out, err);
    if (pair->parsed()) return CmdPair(pa, config, out, err);
    if (run->parsed()) return CmdRun(ra, config, out, err);
    if (score->parsed()) return CmdScore(sa, config, out, err);
  } catch (const std::exception& e) {
    Diag(err, "error", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace irforge::cli
