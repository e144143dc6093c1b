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

// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cli.h"
#include "irforge/features.h"
#include "irforge/image_io.h"
#include "irforge/metrics.h"
#include "irforge/pairing.h"
#include "irforge/translate.h"
#include "metrics_oracles.h"
#include "png_oracle.h"
#include "test_util.h"

namespace irforge::acceptance {
namespace {

namespace fs = std::filesystem;
using namespace irforge::testing;
using Clock = std::chrono::steady_clock;

// Tolerances.
constexpr double kGrayTol = 1e-12;
constexpr double kGrayBudgetSeconds = 5.0;
constexpr double kTriangleRelTol = 1e-9;
constexpr double kFrechet1dTol = 1e-10;
constexpr double kFrechetDiagTol = 1e-8;
constexpr double kFrechetRotationTol = 1e-8;
constexpr double kFrechetSelfTol = 1e-10;
constexpr double kFinalScoreTol = 1e-15;
constexpr double kLpipsTol = 1e-12;
constexpr double kSuiteBudgetSeconds = 120.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

GaussianStats Stats(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return GaussianStats(std::move(mean), std::move(cov), 100);
}

int RunCliQuiet(const std::vector<std::string>& args, std::string* out = nullptr,
                std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::RunCli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

std::string ReadAll(const fs::path& p) {
  const Bytes b = ReadFileBytes(p);
  return std::string(b.begin(), b.end());
}

// ---------------------------------------------------------------------------

Outcome GrayscaleOracle() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::vector<Raster> images;
  for (int i = 0; i < 1000; ++i) images.push_back(RandomRaster(rng, 64, 3));
  const auto start = Clock::now();
  double worst = 0;
  for (const Raster& img : images) {
    const GrayMap g = ToGrayscale(img);
    if (g.width() != img.width() || g.height() != img.height()) {
      o.Fail("dimensions changed");
    }
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        const double mean =
            (double(img.at(x, y, 0)) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0;
        worst = std::max(worst, std::abs(g.at(x, y) - mean));
      }
    }
  }
  const double elapsed = Seconds(start);
  if (worst > kGrayTol) o.Fail(Fmt("max error %.3g", worst));
  if (elapsed >= kGrayBudgetSeconds) o.Fail(Fmt("took %.2f s", elapsed));
  if (o.pass) o.detail = Fmt("max error %.3g, %.3f s", worst, elapsed);
  return o;
}

Outcome DensityReconstruction() {
  Outcome o;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> value(0.0, 255.0);
  std::uniform_int_distribution<std::size_t> side(1, 48);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t w = side(rng), h = side(rng);
    std::vector<double> v(w * h);
    for (double& x : v) x = value(rng);
    const GrayMap g(w, h, v);
    if (!(ReconstructDensity(g, IntensityFactor(1.0)) == g)) {
      o.Fail("factor 1.0 changed a map");
    }
    for (double f : {kRgb2IrIntensity, kSar2IrIntensity}) {
      const GrayMap out = ReconstructDensity(g, IntensityFactor(f));
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double scalar = std::min(255.0, std::max(0.0, v[k] * f));
        if (out.values()[k] != scalar) o.Fail(Fmt("factor %.2f mismatch at %.0f", f, k));
      }
    }
  }
  const GrayMap ends(3, 1, {0.0, 255.0, 250.0});
  const GrayMap hi = ReconstructDensity(ends, IntensityFactor(1.3));
  const GrayMap lo = ReconstructDensity(ends, IntensityFactor(1e-300));
  if (hi.values()[0] != 0.0 || hi.values()[1] != 255.0 || hi.values()[2] != 255.0) {
    o.Fail("upper clamp");
  }
  if (lo.values()[0] != 0.0 || lo.values()[1] < 0.0) o.Fail("lower clamp");
  if (ReconstructDensity(GrayMap(1, 1, {100}), IntensityFactor(1.3)).values()[0] !=
      100 * 1.3) {
    o.Fail("100 * 1.3");
  }
  if (o.pass) o.detail = "identity, clamps and both factors exact";
  return o;
}

Outcome L2Axioms() {
  Outcome o;
  std::mt19937_64 rng(1003);
  for (int i = 0; i < 10000; ++i) {
    const Raster a = RandomRaster(rng, 8, 8, 1);
    const Raster b = RandomRaster(rng, 8, 8, 1);
    const Raster c = RandomRaster(rng, 8, 8, 1);
    const double ab = L2Raw(a, b), ba = L2Raw(b, a), ac = L2Raw(a, c), cb = L2Raw(c, b);
    if (ab < 0 || ac < 0 || cb < 0) o.Fail("negative distance");
    if (ab != ba) o.Fail("asymmetric");
    if (L2Raw(a, a) != 0.0) o.Fail("d(a,a) != 0");
    if ((ab == 0.0) != (a == b)) o.Fail("identity of indiscernibles");
    if (ab > (ac + cb) * (1 + kTriangleRelTol)) o.Fail("triangle inequality");
  }
  for (std::size_t side : {1, 8, 64}) {
    for (int c : {1, 3}) {
      const double v = L2Normalized(Raster::Filled(side, side, c, 0),
                                    Raster::Filled(side, side, c, 255));
      if (v != 1.0) o.Fail(Fmt("black/white = %.17g", v));
    }
  }
  if (o.pass) o.detail = "10000 triples; black/white = 1 exactly";
  return o;
}

Outcome FrechetCorrectness() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> mu(-10, 10), sd(0, 5);
  double worst_1d = 0;
  for (int i = 0; i < 1000; ++i) {
    const double m1 = mu(rng), m2 = mu(rng), s1 = sd(rng), s2 = sd(rng);
    const double got =
        FrechetDistance(Stats(Eigen::VectorXd::Constant(1, m1), Eigen::MatrixXd::Constant(1, 1, s1 * s1)),
                        Stats(Eigen::VectorXd::Constant(1, m2), Eigen::MatrixXd::Constant(1, 1, s2 * s2)));
    const double closed = (m1 - m2) * (m1 - m2) + (s1 - s2) * (s1 - s2);
    worst_1d = std::max(worst_1d, std::abs(got - closed));
  }
  if (worst_1d > kFrechet1dTol) o.Fail(Fmt("1-D error %.3g", worst_1d));

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const double diag =
      FrechetDistance(Stats(zero, Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix()),
                      Stats(zero, Eigen::Vector2d(9, 16).asDiagonal().toDenseMatrix()));
  if (std::abs(diag - 8.0) > kFrechetDiagTol) o.Fail(Fmt("diagonal case %.17g", diag));

  double worst_rot = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 8;
    const auto mp = RandomVector(rng, d, 1), mq = RandomVector(rng, d, 1);
    const auto sp = RandomSpd(rng, d), sq = RandomSpd(rng, d);
    const auto r = RandomOrthogonal(rng, d);
    const double base = FrechetDistance(Stats(mp, sp), Stats(mq, sq));
    const double rotated = FrechetDistance(Stats(r * mp, r * sp * r.transpose()),
                                           Stats(r * mq, r * sq * r.transpose()));
    worst_rot = std::max(worst_rot, std::abs(base - rotated));
  }
  if (worst_rot > kFrechetRotationTol) o.Fail(Fmt("rotation error %.3g", worst_rot));

  double worst_self = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 8;
    const GaussianStats p = Stats(RandomVector(rng, d, 3), RandomPsd(rng, d, 1 + i % d));
    worst_self = std::max(worst_self, std::abs(FrechetDistance(p, p)));
  }
  if (worst_self > kFrechetSelfTol) o.Fail(Fmt("self distance %.3g", worst_self));
  if (o.pass) {
    o.detail = Fmt("1-D %.2g, rotation %.2g", worst_1d, worst_rot) +
               Fmt(", diag |err| %.2g, self %.2g", std::abs(diag - 8), worst_self);
  }
  return o;
}

Outcome FinalScoreFormula() {
  Outcome o;
  const double third = FinalScore(1, 0.25, 0.25);
  if (std::abs(third - 1.0 / 3.0) > kFinalScoreTol) o.Fail(Fmt("got %.17g", third));
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> v(0, 10), dv(1e-6, 1);
  for (int i = 0; i < 1000; ++i) {
    const double f = v(rng), p = v(rng), l = v(rng), d = dv(rng);
    const double base = FinalScore(f, p, l);
    if (!(FinalScore(f + d, p, l) > base)) o.Fail("not increasing in fid");
    if (!(FinalScore(f, p + d, l) > base)) o.Fail("not increasing in lpips");
    if (!(FinalScore(f, p, l + d) > base)) o.Fail("not increasing in l2");
  }
  if (o.pass) o.detail = Fmt("|final - 1/3| = %.3g", std::abs(third - 1.0 / 3.0));
  return o;
}

Outcome LpipsPipeline() {
  Outcome o;
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<std::size_t> count(1, 40), dim(1, 24);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = count(rng), d = dim(rng);
    const FeatureSet a = RandomFeatureSet(rng, n, d, "t");
    FeatureSet b = RandomFeatureSet(rng, n, d, "t");
    if (i % 10 == 0) {  // exercise zero vectors
      std::vector<double> v(b.vectors().begin(), b.vectors().end());
      std::fill(v.begin(), v.begin() + d, 0.0);
      b = FeatureSet(n, d, std::move(v), "t");
    }
    if (LpipsDistance(a, a) != 0.0) o.Fail("non-zero on identical sets");
    worst = std::max(worst, std::abs(LpipsDistance(a, b) - LpipsOracle(a, b)));
  }
  if (worst > kLpipsTol) o.Fail(Fmt("max oracle error %.3g", worst));
  if (o.pass) o.detail = Fmt("max oracle error %.3g", worst);
  return o;
}

Outcome EndToEndDeterminism() {
  Outcome o;
  TempDir dir;
  std::mt19937_64 rng(1007);
  PairManifest manifest;
  manifest.task = Task::kRgb2Ir;
  for (int i = 0; i < 50; ++i) {
    const std::string loc = "site" + std::to_string(i % 5);
    const fs::path src = dir / (loc + "/rgb/frame" + std::to_string(i) + ".png");
    const fs::path tgt = dir / (loc + "/ir/frame" + std::to_string(i) + ".png");
    fs::create_directories(src.parent_path());
    fs::create_directories(tgt.parent_path());
    const std::size_t w = 32 + i % 9, h = 32 + i % 5;
    WriteImageAt(src, RandomRaster(rng, w, h, 3));
    WriteImageAt(tgt, RandomRaster(rng, w, h, 1));
    manifest.records.push_back({loc, src, tgt});
  }
  WriteFileBytes(dir / "manifest.tsv", [&] {
    const std::string t = FormatManifest(manifest);
    return Bytes(t.begin(), t.end());
  }());
  std::map<int, std::string> blobs;
  for (int workers : {1, 4, 8}) {
    const fs::path out = dir / ("out" + std::to_string(workers));
    std::string stdout_text, stderr_text;
    const int code = RunCliQuiet({"run", "--task", "RGB2IR", "--manifest",
                                  (dir / "manifest.tsv").string(), "--out", out.string(),
                                  "--workers", std::to_string(workers), "--evaluate"},
                                 &stdout_text, &stderr_text);
    if (code != 0) {
      o.Fail("exit " + std::to_string(code) + ": " + stderr_text);
      return o;
    }
    std::string blob = stdout_text + ReadAll(out / "summary.txt");
    // run.log carries output paths, which embed the per-run directory.
    std::string log = ReadAll(out / "run.log");
    for (std::size_t p; (p = log.find(out.string())) != std::string::npos;) {
      log.replace(p, out.string().size(), "<out>");
    }
    blob += log;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(out)) {
      if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.size() != 50) o.Fail(std::to_string(files.size()) + " outputs");
    for (const fs::path& f : files) blob += fs::relative(f, out).string() + ReadAll(f);
    blobs[workers] = std::move(blob);
  }
  if (blobs[1] != blobs[4] || blobs[1] != blobs[8]) o.Fail("outputs differ across workers");
  if (o.pass) o.detail = "50 records, workers 1/4/8 byte-identical";
  return o;
}

Outcome PairingReproducibility() {
  Outcome o;
  LocationPool pool;
  pool.location_id = "site";
  pool.of(Modality::kRgb) = {"rgb/a.png", "rgb/b.png", "rgb/c.png"};
  pool.of(Modality::kIr) = {"ir/x.png", "ir/y.png"};
  constexpr int kDraws = 10000;
  const PairManifest first = SamplePairs(std::span(&pool, 1), Task::kRgb2Ir, kDraws, 31337);
  const PairManifest second = SamplePairs(std::span(&pool, 1), Task::kRgb2Ir, kDraws, 31337);
  const std::hash<std::string> hash;
  if (hash(FormatManifest(first)) != hash(FormatManifest(second))) {
    o.Fail("manifest hashes differ");
  }
  std::map<std::pair<std::string, std::string>, int> counts;
  for (const PairRecord& r : first.records) ++counts[{r.source.string(), r.target.string()}];
  if (counts.size() != 6) o.Fail("not all 6 cells drawn");
  const double expected = kDraws / 6.0;
  double chi2 = 0;
  for (const auto& [cell, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
  // Two-sided 3-sigma coverage, 5 degrees of freedom.
  const double limit =
      boost::math::quantile(boost::math::chi_squared(5), 0.9973002039367398);
  if (!(chi2 < limit)) o.Fail(Fmt("chi2 %.3f >= %.3f", chi2, limit));
  if (o.pass) o.detail = Fmt("chi2 = %.3f < %.3f", chi2, limit);
  return o;
}

Outcome RoundTripIo() {
  Outcome o;
  std::mt19937_64 rng(1009);
  for (int i = 0; i < 500; ++i) {
    const Raster gray = RandomRaster(rng, 48, 1);
    const Raster rgb = RandomRaster(rng, 48, 3);
    if (!(DecodeImage(EncodeImage(gray, ImageFormat::kPgm)) == gray)) o.Fail("pgm");
    if (!(DecodeImage(EncodeImage(rgb, ImageFormat::kPpm)) == rgb)) o.Fail("ppm");
    if (!(DecodeImage(EncodeImage(gray, ImageFormat::kPng)) == gray)) o.Fail("png gray");
    if (!(DecodeImage(EncodeImage(rgb, ImageFormat::kPng)) == rgb)) o.Fail("png rgb");
  }
  for (int i = 0; i < 20; ++i) {
    const int channels = i % 2 ? 3 : 1;
    const Raster r = RandomRaster(rng, 3 + i * 3, 2 + i * 2, channels);
    const ReferenceImage ref{r.width(), r.height(), channels,
                             {r.samples().begin(), r.samples().end()}};
    // Reference encoder -> our decoder.
    const Bytes theirs = ReferenceEncodePng(ref, ReferenceFilter::kAll, i % 4 == 3);
    if (theirs.empty() || !(DecodePng(theirs) == r)) o.Fail("decode of reference PNG");
    // Our encoder -> reference decoder.
    ReferenceImage decoded;
    if (!ReferenceDecodePng(EncodePng(r), decoded) || decoded.samples != ref.samples ||
        decoded.width != ref.width || decoded.height != ref.height) {
      o.Fail("reference decode of our PNG");
    }
  }
  if (o.pass) o.detail = "500 rasters x 4 codecs; 20 PNG fixtures cross-checked";
  return o;
}

Outcome IdenticalSetScore() {
  Outcome o;
  TempDir dir;
  std::mt19937_64 rng(1010);
  for (int i = 0; i < 12; ++i) {
    WriteImageAt(dir / ("set/img" + std::to_string(i) + ".png"),
                   RandomRaster(rng, 40 + i, 36, i % 2 ? 3 : 1));
  }
  std::string out, err;
  const int code = RunCliQuiet({"score", "--generated", (dir / "set").string(), "--target",
                                (dir / "set").string(), "--json",
                                (dir / "r.json").string()},
                               &out, &err);
  if (code != 0) o.Fail("exit " + std::to_string(code) + ": " + err);
  if (out.find("\nfinal=0\n") == std::string::npos) o.Fail("report final != 0");
  const std::string json = ReadAll(dir / "r.json");
  if (json.find("\"final\": 0.0") == std::string::npos) o.Fail("json final != 0.0");
  if (o.pass) o.detail = "final=0, exit 0";
  return o;
}

}  // namespace
}  // namespace irforge::acceptance

int main() {
  using namespace irforge::acceptance;
  const auto suite_start = Clock::now();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"grayscale-oracle", GrayscaleOracle},
      {"density-reconstruction", DensityReconstruction},
      {"l2-metric-axioms", L2Axioms},
      {"frechet-correctness", FrechetCorrectness},
      {"final-score-formula", FinalScoreFormula},
      {"lpips-pipeline", LpipsPipeline},
      {"end-to-end-determinism", EndToEndDeterminism},
      {"pairing-reproducibility-uniformity", PairingReproducibility},
      {"round-trip-io", RoundTripIo},
      {"identical-set-score", IdenticalSetScore},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome.Fail(std::string("exception: ") + e.what());
    }
    // The suite budget is checked on the last criterion.
    if (&check == &criteria.back().second) {
      const double total = Seconds(suite_start);
      if (total >= kSuiteBudgetSeconds) outcome.Fail(Fmt("suite took %.1f s", total));
      outcome.detail += Fmt(" (suite %.1f s)", total);
    }
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name,
                outcome.detail.c_str());
    if (!outcome.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
