// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "delamseg/baselines.hpp"
#include "delamseg/discrimination.hpp"
#include "delamseg/eval.hpp"
#include "delamseg/extraction.hpp"
#include "delamseg/morphology.hpp"
#include "delamseg/pipeline.hpp"
#include "delamseg/raster_io.hpp"
#include "delamseg/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace delamseg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const StructuringElement kSquare = StructuringElement::square(1);

// Every segment() call in this binary goes through here so the subset law is
// checked on all of them.
struct SubsetLedger {
  int runs = 0;
  int violations = 0;
};
SubsetLedger g_subset;

SegmentResult run_segment(const ThermalRaster& r, const PipelineConfig& cfg) {
  SegmentResult res = segment(r, cfg);
  ++g_subset.runs;
  if (!mask_subset(res.mask, res.maxima_union) || !res.report.subset_law) ++g_subset.violations;
  return res;
}

Outcome reconstruction_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 16), lift(0, 5);
  int mismatches = 0, cases = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int w = size(rng), h = size(rng);
    const ThermalRaster f = trial % 2 ? fixtures::random_raster(rng, w, h, 10)
                                      : fixtures::random_real_raster(rng, w, h);
    ThermalRaster g = f;
    for (double& v : g.values()) v -= lift(rng) * (trial % 2 ? 1.0 : 0.37);
    const ThermalRaster fast = reconstruct(g, f, kSquare);
    if (!(fast == reconstruct_naive(g, f, kSquare)) || !(fast == oracle::reconstruct_fixpoint(g, f)))
      ++mismatches;
    ++cases;
  }
  const ThermalRaster f = fixtures::row({1, 3, 2, 5, 1});
  const ThermalRaster g = fixtures::row({-1, 1, 0, 3, -1});
  const ThermalRaster expect = fixtures::row({1, 2, 2, 3, 1});
  const bool fixture_ok = reconstruct(g, f, kSquare) == expect &&
                          reconstruct_naive(g, f, kSquare) == expect;
  const double secs = seconds_since(t0);
  return {mismatches == 0 && fixture_ok && secs < 5.0,
          fmt("%d random cases, %d mismatches, fixture %s, %.2f s", cases, mismatches,
              fixture_ok ? "exact" : "WRONG", secs)};
}

Outcome signal_domes() {
  const double h = 3.0;
  const Signal1D s = signal_fig1(0.0, 10.0, 500);
  const ThermalRaster f = fixtures::row(s.f);
  const Dome d = h_dome(f, h, MorphSettings{});

  ThermalRaster marker = f;
  for (double& v : marker.values()) v -= h;
  const ThermalRaster naive = reconstruct_naive(marker, f, kSquare);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(d.dome[i] - (f[i] - naive[i])));

  const std::vector<oracle::Peak> peaks = oracle::peak_dynamics(s.f);
  std::vector<int> tall_in_region(d.support.regions.size() + 1, 0);
  std::vector<double> best_dynamic(d.support.regions.size() + 1, -1.0);
  int tall = 0, orphan_peaks = 0;
  for (const oracle::Peak& p : peaks) {
    const int label = d.support.label_map[p.index];
    if (label == 0) {
      ++orphan_peaks;
      continue;
    }
    best_dynamic[label] = std::max(best_dynamic[label], p.dynamic);
    if (p.dynamic > h) {
      ++tall;
      ++tall_in_region[label];
    }
  }
  int full = 0, bad = 0;
  for (const Region& r : d.support.regions) {
    double top = 0.0;
    for (std::size_t p : r.pixels) top = std::max(top, d.dome[p]);
    if (std::abs(top - h) <= 1e-9) {
      ++full;
      if (tall_in_region[r.id] != 1) ++bad;
    } else if (tall_in_region[r.id] != 0 || std::abs(top - best_dynamic[r.id]) > 1e-9) {
      ++bad;
    }
  }
  const bool ok = worst <= 1e-9 && bad == 0 && orphan_peaks == 0 && full == tall;
  return {ok, fmt("dome vs oracle max diff %.1e; %d maxima with dynamic > 3 <-> %d full-height "
                  "supports; %zu supports total, %d inconsistent",
                  worst, tall, full, d.support.regions.size(), bad)};
}

Outcome regularization() {
  const ThermalRaster f = fixtures::row({1, 3, 2, 5, 1});
  const MorphSettings ms;
  const std::size_t plain = h_dome(f, 4.0, ms).support.regions.size();
  const std::size_t reg =
      dome_from_marker(f, regularized_marker(f, 4.0), ms, Connectivity::Eight).support.regions.size();
  return {plain == 1 && reg == 2, fmt("h=4: unregularized %zu support(s), regularized %zu", plain, reg)};
}

Outcome dome_monotonicity() {
  std::mt19937_64 rng(808);
  const MorphSettings ms;
  int subset_bad = 0, count_bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const ThermalRaster f = trial % 2 ? fixtures::random_real_raster(rng, 16, 16)
                                      : fixtures::random_raster(rng, 16, 16, 9);
    std::vector<BinaryMask> masks;
    std::vector<std::size_t> counts;
    for (double h : {0.5, 1.0, 2.0, 4.0}) {
      const Dome d = h_dome(f, h, ms);
      masks.push_back(d.support.to_mask());
      counts.push_back(d.support.regions.size());
    }
    for (std::size_t i = 0; i < masks.size(); ++i) {
      for (std::size_t j = i + 1; j < masks.size(); ++j) {
        if (!mask_subset(masks[i], masks[j])) ++subset_bad;
        if (counts[j] > counts[i]) ++count_bad;
      }
    }
  }
  return {subset_bad == 0 && count_bad == 0,
          fmt("50 rasters x h in {0.5,1,2,4}: %d subset and %d count violations", subset_bad,
              count_bad)};
}

Outcome step_anchors() {
  const int a = max_steps(3.3, 0.1), b = max_steps(14.85, 0.15);
  return {a == 33 && b == 99, fmt("max_steps(3.3, 0.1) = %d, max_steps(14.85, 0.15) = %d", a, b)};
}

Outcome statistics_anchor() {
  const ReferenceStats bridge = ReferenceStats::from_moments(0.3814, 0.1439);
  const ReferenceStats slab = ReferenceStats::from_moments(0.0608, 0.022);
  const double reference = 0.3628;
  const double deviation = std::abs(slab.v_var - reference) / reference * 100.0;
  const bool ok = std::abs(bridge.v_var - 0.3772) <= 0.001 && std::abs(slab.v_var - 0.3618) <= 0.001;
  return {ok, fmt("bridge v_var %.5f (expect 0.3772), slab v_var %.5f (expect 0.3618; reference "
                  "value 0.3628 deviates by %.2f%%)",
                  bridge.v_var, slab.v_var, deviation)};
}

Outcome step_size_claim() {
  const Scene scene = gen_scene(fixtures::step_size_scene());
  PipelineConfig cfg;
  const auto t0 = Clock::now();
  const ThermalRaster t_s = diffuse(scene.raster, cfg.diffusion);
  const std::vector<double> deltas{0.05, 0.1, 0.15, 0.2, 0.3};
  const std::vector<SweepRow> rows = step_size_sweep(t_s, cfg.extraction, deltas);
  const double secs = seconds_since(t0);
  bool ok = secs < 60.0;
  std::string detail;
  for (const SweepRow& r : rows) {
    if (r.delta <= 0.2 + 1e-12 && r.area_diff_pct > 10.0) ok = false;
    detail += fmt("d=%.2f:%.2f%% ", r.delta, r.area_diff_pct);
  }
  run_segment(scene.raster, cfg);
  return {ok, detail + fmt("(256x256 sweep %.2f s)", secs)};
}

Outcome nonuniform_background() {
  const SceneSpec s = fixtures::nonuniform_scene();
  const Scene scene = gen_scene(s);
  const SegmentResult res = run_segment(scene.raster, PipelineConfig{});
  const double ours0 = fixtures::local_iou(res.mask, s, scene, 0);
  const double ours1 = fixtures::local_iou(res.mask, s, scene, 1);

  const ValueRange vr = valid_range(scene.raster);
  double best_min = 0.0, best_theta = vr.min;
  int both_ok = 0;
  for (int k = 0;; ++k) {
    const double theta = vr.min + 0.05 * k;
    if (theta > vr.max) break;
    const BinaryMask m = threshold_segment(scene.raster, ThresholdSpec::absolute(theta));
    const double a = fixtures::local_iou(m, s, scene, 0), b = fixtures::local_iou(m, s, scene, 1);
    if (a >= 0.7 && b >= 0.7) ++both_ok;
    if (std::min(a, b) > best_min) {
      best_min = std::min(a, b);
      best_theta = theta;
    }
  }
  const BinaryMask km = kmeans_temperature_segment(scene.raster, 2, true);
  const double k0 = fixtures::local_iou(km, s, scene, 0), k1 = fixtures::local_iou(km, s, scene, 1);

  const bool ok = ours0 >= 0.7 && ours1 >= 0.7 && both_ok == 0 && std::min(k0, k1) < 0.7;
  return {ok, fmt("pipeline IoU %.3f / %.3f; best threshold %.2f C gives min IoU %.3f; "
                  "k-means IoU %.3f / %.3f",
                  ours0, ours1, best_theta, best_min, k0, k1)};
}

Outcome subset_law() {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    run_segment(gen_scene(fixtures::nonuniform_scene(seed)).raster, PipelineConfig{});
  }
  const Scene b = gen_scene(fixtures::boundary_scene());
  PipelineConfig raw;
  raw.weight_source = WeightSource::Raw;
  run_segment(b.raster, raw);
  PipelineConfig four;
  four.extraction.connectivity = Connectivity::Four;
  four.extraction.morph.se = StructuringElement::cross();
  run_segment(b.raster, four);
  run_segment(ThermalRaster(16, 16, 20.0), PipelineConfig{});
  return {g_subset.violations == 0,
          fmt("%d segment runs, %d violations", g_subset.runs, g_subset.violations)};
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "delamseg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return delamseg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

bool run_all_commands(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  SceneSpec spec = fixtures::nonuniform_scene(5);
  spec.width = 128;
  spec.height = 64;
  spec.background.gx = 2.0 / 127.0;
  spec.blobs = {fixtures::plateau(32, 32, 9, 1.6, 1.0), fixtures::plateau(96, 32, 9, 1.6, 1.0)};
  write_file_atomic(dir / "scene.spec", format_scene_spec(spec));
  const std::string d = dir.string() + "/";
  int rc = 0;
  rc |= invoke({"synth", "--spec", d + "scene.spec", "--seed", "42"});
  rc |= invoke({"segment", "--input", d + "scene.csv", "--output", d + "mask.pgm"});
  rc |= invoke({"maxima", "--input", d + "scene.csv", "--output", d + "union.pgm"});
  rc |= invoke({"baseline", "--input", d + "scene.csv", "--output", d + "kmeans.pgm"});
  rc |= invoke({"sweep", "--input", d + "scene.csv", "--output", d + "sweep.csv"});
  rc |= invoke({"eval", "--input", d + "mask.pgm", "--truth", d + "scene.truth.pgm", "--output",
             d + "eval.kv"});
  return rc == 0;
}

Outcome determinism() {
  const Scene scene = gen_scene(fixtures::nonuniform_scene(2));
  const SegmentResult a = run_segment(scene.raster, PipelineConfig{});
  const SegmentResult b = run_segment(scene.raster, PipelineConfig{});
  const bool lib_same = a.mask == b.mask && a.maxima_union == b.maxima_union &&
                        format_report_text(a.report, {}) == format_report_text(b.report, {});

  const fs::path root = fs::temp_directory_path() / "delamseg_acceptance";
  const bool ran = run_all_commands(root / "run1") && run_all_commands(root / "run2");
  int files = 0, differ = 0;
  if (ran) {
    for (const auto& entry : fs::directory_iterator(root / "run1")) {
      ++files;
      const fs::path twin = root / "run2" / entry.path().filename();
      if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin)) ++differ;
    }
  }
  return {lib_same && ran && differ == 0 && files > 0,
          fmt("library rerun %s; 6 CLI commands twice: %d files, %d differ",
              lib_same ? "identical" : "DIFFERENT", files, differ)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // The subset-law line runs last so it covers every segmentation above it.
  const std::vector<Criterion> criteria = {
      {1, "fast reconstruction equals the naive fixpoint", reconstruction_oracle},
      {2, "1-D signal domes match maxima dynamics", signal_domes},
      {3, "regularized marker keeps both peaks", regularization},
      {4, "dome supports nest and counts fall with h", dome_monotonicity},
      {5, "step-count anchors", step_anchors},
      {6, "coefficient-of-variation anchors", statistics_anchor},
      {7, "area stable across step sizes up to 0.2 C", step_size_claim},
      {8, "non-uniform background beats threshold and k-means", nonuniform_background},
      {10, "repeated runs are byte-identical", determinism},
      {9, "final mask inside the union of dome supports", subset_law},
  };
  std::vector<std::string> lines(11);
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    lines[c.id] = fmt("[%s] criterion %d: %s: ", o.pass ? "PASS" : "FAIL", c.id, c.name) + o.detail;
  }
  for (int id = 1; id <= 10; ++id) std::printf("%s\n", lines[id].c_str());
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
