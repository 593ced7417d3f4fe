#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "delamseg/baselines.hpp"
#include "delamseg/config.hpp"
#include "delamseg/error.hpp"
#include "delamseg/eval.hpp"
#include "delamseg/pipeline.hpp"
#include "delamseg/raster_io.hpp"
#include "delamseg/synth.hpp"

namespace delamseg::cli {
namespace {

namespace fs = std::filesystem;

/// Failure outside the pipeline, tagged with the stage it happened in.
struct CommandError : std::runtime_error {
  CommandError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage)) {}
  std::string stage;
};

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw CommandError(stage, e.what());
  }
}

struct PipelineFlags {
  std::string config_path;
  std::optional<double> h_in;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<int> min_area;
  std::optional<std::string> exclusion_mask;
  std::vector<double> bands;
  std::optional<int> connectivity;
};

struct InputFlags {
  std::string input;
  std::string format;
};

void add_input_flags(CLI::App& cmd, InputFlags& in) {
  cmd.add_option("--input,-i", in.input, "Input thermal raster")->required();
  cmd.add_option("--format", in.format, "Raster format: csv, f32 or pgm16 (default: from extension)")
      ->check(CLI::IsMember({"csv", "f32", "pgm16"}));
}

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& f) {
  cmd.add_option("--config,-c", f.config_path, "key=value config file");
  cmd.add_option("--h-in", f.h_in, "Initial dome height, deg C");
  cmd.add_option("--delta", f.delta, "Regularization step, deg C (>= 0.05)");
  cmd.add_option("--sigma", f.sigma, "Diffusion presmoothing sigma, px");
  cmd.add_option("--min-area", f.min_area, "Minimum boundary-support component area, px");
  cmd.add_option("--exclusion-mask", f.exclusion_mask, "Mask of pixels to ignore");
  cmd.add_option("--bands", f.bands, "mean_halfwidth,cv_low,cv_high")
      ->delimiter(',')
      ->expected(3);
  cmd.add_option("--connectivity", f.connectivity, "4 or 8")
      ->check(CLI::IsMember({4, 8}));
}

RunConfig resolve_config(const PipelineFlags& f) {
  return in_stage("config", [&] {
    RunConfig cfg;
    if (!f.config_path.empty()) cfg = load_run_config(f.config_path);
    KeyValues over;
    if (f.h_in) over.set("extraction.h_in", format_double(*f.h_in));
    if (f.delta) over.set("extraction.delta", format_double(*f.delta));
    if (f.sigma) over.set("diffusion.sigma", format_double(*f.sigma));
    if (f.min_area) over.set("reference.min_area", std::to_string(*f.min_area));
    if (f.exclusion_mask) over.set("io.exclusion_mask", *f.exclusion_mask);
    if (f.connectivity) over.set("extraction.connectivity", std::to_string(*f.connectivity));
    if (!f.bands.empty()) {
      over.set("bands.mean_halfwidth", format_double(f.bands[0]));
      over.set("bands.cv_low", format_double(f.bands[1]));
      over.set("bands.cv_high", format_double(f.bands[2]));
    }
    cfg = apply_config(over, std::move(cfg));
    if (!cfg.exclusion_mask_path.empty()) {
      const fs::path p = cfg.exclusion_mask_path;
      cfg.pipeline.ref.exclusion_mask = load_mask(p, mask_format_from_path(p));
    }
    cfg.pipeline.validate();
    return cfg;
  });
}

ThermalRaster read_input(const InputFlags& in) {
  return in_stage("input", [&] {
    const fs::path p = in.input;
    const RasterFormat fmt =
        in.format.empty() ? raster_format_from_path(p) : raster_format_from_string(in.format);
    return load_raster(p, fmt);
  });
}

void write_mask(const BinaryMask& mask, const fs::path& path) {
  in_stage("output", [&] { save_mask(mask, path, mask_format_from_path(path)); });
}

void write_text(const fs::path& path, const std::string& text) {
  in_stage("output", [&] { write_file_atomic(path, text); });
}

fs::path sibling(const fs::path& base, const std::string& suffix) {
  return fs::path(base.string() + suffix);
}

std::string verdict_counts(const StepReport& s) {
  std::ostringstream os;
  os << s.accepted << ',' << s.too_small << ',' << s.mean_rejected << ',' << s.cv_rejected
     << ',' << s.excluded;
  return os.str();
}

KeyValues report_key_values(const RunConfig& cfg, const SegmentReport& r) {
  KeyValues kv = to_key_values(cfg, "config.");
  kv.set("report.stop", std::string(to_string(r.stop)));
  kv.set("report.max_steps", std::to_string(r.max_steps));
  kv.set("report.steps_run", std::to_string(r.steps.empty() ? 0 : r.steps.size() - 1));
  kv.set("report.contrast", format_double(r.contrast));
  kv.set("report.kappa", format_double(r.kappa));
  kv.set("report.has_reference", r.has_reference ? "true" : "false");
  if (r.has_reference) {
    kv.set("report.m_grad", format_double(r.stats.m_grad));
    kv.set("report.delta_std", format_double(r.stats.delta_std));
    kv.set("report.v_var", format_double(r.stats.v_var));
    kv.set("report.gradient_split", format_double(r.clustering.threshold));
    kv.set("report.d_g_area", std::to_string(r.d_g_area));
  }
  kv.set("report.maxima_union_area", std::to_string(r.maxima_union_area));
  kv.set("report.mask_area", std::to_string(r.mask_area));
  kv.set("report.subset_law", r.subset_law ? "true" : "false");
  for (const StepReport& s : r.steps) {
    const std::string k = "report.step." + std::to_string(s.step);
    kv.set(k + ".offset", format_double(s.offset));
    kv.set(k + ".regions", std::to_string(s.regions));
    kv.set(k + ".support_area", std::to_string(s.support_area));
    kv.set(k + ".verdicts", verdict_counts(s));
  }
  return kv;
}

int cmd_segment(const InputFlags& in, const PipelineFlags& pf, const std::string& output,
                std::ostream& out) {
  const RunConfig cfg = resolve_config(pf);
  const ThermalRaster raster = read_input(in);
  const SegmentResult res = segment(raster, cfg.pipeline);
  const fs::path mask_path = output;
  write_mask(res.mask, mask_path);
  write_text(sibling(mask_path, ".report.txt"), format_report_text(res.report, cfg.pipeline));
  write_text(sibling(mask_path, ".report.kv"), report_key_values(cfg, res.report).format());
  out << "mask area " << res.report.mask_area << " px, stop: " << to_string(res.report.stop)
      << '\n';
  return kExitOk;
}

int cmd_maxima(const InputFlags& in, const PipelineFlags& pf, const std::string& output,
               std::ostream& out) {
  const RunConfig cfg = resolve_config(pf);
  const ThermalRaster raster = read_input(in);
  const SegmentResult res = segment(raster, cfg.pipeline);
  const fs::path path = output;
  write_mask(res.maxima_union, path);
  std::ostringstream csv;
  csv << "step,offset,regions,support_area\n";
  for (const StepReport& s : res.report.steps) {
    csv << s.step << ',' << format_double(s.offset) << ',' << s.regions << ','
        << s.support_area << '\n';
  }
  write_text(sibling(path, ".steps.csv"), csv.str());
  out << "maxima union " << res.report.maxima_union_area << " px over "
      << res.report.steps.size() << " steps\n";
  return kExitOk;
}

struct BaselineFlags {
  std::string method = "kmeans";
  std::optional<double> value;
  int k = 2;
  bool night = false;
};

int cmd_baseline(const InputFlags& in, const BaselineFlags& bf, const std::string& output,
                 std::ostream& out) {
  const ThermalRaster raster = read_input(in);
  const BinaryMask mask = in_stage("baseline", [&] {
    if (bf.method == "kmeans") return kmeans_temperature_segment(raster, bf.k, !bf.night);
    if (!bf.value) throw ParameterError("--value is required for method " + bf.method);
    const ThresholdSpec spec = bf.method == "threshold" ? ThresholdSpec::absolute(*bf.value)
                                                        : ThresholdSpec::percentile(*bf.value);
    return threshold_segment(raster, spec);
  });
  write_mask(mask, output);
  out << "mask area " << mask.count() << " px\n";
  return kExitOk;
}

struct SynthFlags {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

int cmd_synth(const SynthFlags& sf, std::string output, std::ostream& out) {
  SceneSpec spec = in_stage("config", [&] { return load_scene_spec(sf.spec); });
  if (sf.seed) spec.seed = *sf.seed;
  const Scene scene = in_stage("synth", [&] {
    spec.validate();
    return gen_scene(spec);
  });
  if (output.empty()) output = fs::path(sf.spec).replace_extension().string();
  const RasterFormat fmt = raster_format_from_string(sf.format);
  const char* ext = fmt == RasterFormat::Csv ? ".csv" : fmt == RasterFormat::F32Binary ? ".f32" : ".pgm";
  in_stage("output", [&] { save_raster(scene.raster, output + ext, fmt); });
  write_mask(scene.truth.defects, output + ".truth.pgm");
  for (std::size_t i = 0; i < scene.truth.footprints.size(); ++i) {
    write_mask(scene.truth.footprints[i], output + ".truth." + std::to_string(i) + ".pgm");
  }
  write_text(output + ".resolved.spec", format_scene_spec(spec));
  out << "wrote " << output << ext << " and " << scene.truth.footprints.size()
      << " footprint masks\n";
  return kExitOk;
}

int cmd_sweep(const InputFlags& in, const PipelineFlags& pf, std::vector<double> deltas,
              const std::string& output, std::ostream& out) {
  const RunConfig cfg = resolve_config(pf);
  const ThermalRaster raster = read_input(in);
  if (deltas.empty()) deltas = {0.05, 0.1, 0.15, 0.2, 0.3};
  const ThermalRaster t_s =
      in_stage("smoothing", [&] { return diffuse(raster, cfg.pipeline.diffusion); });
  const std::vector<SweepRow> rows = in_stage(
      "extraction", [&] { return step_size_sweep(t_s, cfg.pipeline.extraction, deltas); });
  const std::string csv = format_sweep_csv(rows);
  if (output.empty()) {
    out << csv;
  } else {
    write_text(output, csv);
    out << "wrote " << rows.size() << " sweep rows\n";
  }
  return kExitOk;
}

int cmd_eval(const std::string& mask_path, const std::string& truth_path,
             const std::string& output, std::ostream& out) {
  const auto load = [](const fs::path& p) { return load_mask(p, mask_format_from_path(p)); };
  const BinaryMask mask = in_stage("input", [&] { return load(mask_path); });
  const BinaryMask truth = in_stage("input", [&] { return load(truth_path); });
  KeyValues kv = in_stage("eval", [&] {
    const std::size_t inter = mask_and(mask, truth).count();
    KeyValues r;
    r.set("iou", format_double(iou(mask, truth)));
    r.set("precision", format_double(mask.count() ? double(inter) / mask.count() : 1.0));
    r.set("recall", format_double(truth.count() ? double(inter) / truth.count() : 1.0));
    r.set("mask_area", std::to_string(mask.count()));
    r.set("truth_area", std::to_string(truth.count()));
    return r;
  });
  const std::string text = kv.format();
  if (!output.empty()) write_text(output, text);
  out << text;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delamination segmentation for thermal rasters", "delamseg"};
  app.require_subcommand(1);

  InputFlags in;
  PipelineFlags pf;
  std::string output;

  auto* seg = app.add_subcommand("segment", "Segment delaminations into a mask");
  add_input_flags(*seg, in);
  add_pipeline_flags(*seg, pf);
  seg->add_option("--output,-o", output, "Mask path (.pgm or .csv)")->required();

  auto* max = app.add_subcommand("maxima", "Write the union of all dome supports");
  add_input_flags(*max, in);
  add_pipeline_flags(*max, pf);
  max->add_option("--output,-o", output, "Mask path (.pgm or .csv)")->required();

  BaselineFlags bf;
  auto* base = app.add_subcommand("baseline", "Threshold or k-means segmentation");
  add_input_flags(*base, in);
  base->add_option("--output,-o", output, "Mask path (.pgm or .csv)")->required();
  base->add_option("--method", bf.method, "threshold, percentile or kmeans")
      ->check(CLI::IsMember({"threshold", "percentile", "kmeans"}));
  base->add_option("--value", bf.value, "Threshold in deg C, or percentile 0..100");
  base->add_option("--k", bf.k, "k-means cluster count");
  base->add_flag("--night", bf.night, "Nighttime rule: drop the warmest cluster");

  SynthFlags sf;
  auto* syn = app.add_subcommand("synth", "Generate a synthetic scene and its ground truth");
  syn->add_option("--spec", sf.spec, "Scene spec file")->required();
  syn->add_option("--seed", sf.seed, "Override the spec seed");
  syn->add_option("--format", sf.format, "Raster format: csv, f32 or pgm16")
      ->check(CLI::IsMember({"csv", "f32", "pgm16"}));
  syn->add_option("--output,-o", output, "Output prefix (default: spec path sans extension)");

  std::vector<double> deltas;
  auto* sw = app.add_subcommand("sweep", "Step-size sensitivity table");
  add_input_flags(*sw, in);
  add_pipeline_flags(*sw, pf);
  sw->add_option("--deltas", deltas, "Comma-separated step sizes, must include 0.05")
      ->delimiter(',');
  sw->add_option("--output,-o", output, "CSV path (default: stdout)");

  std::string truth;
  auto* ev = app.add_subcommand("eval", "Compare a mask with ground truth");
  ev->add_option("--input,-i", in.input, "Predicted mask")->required();
  ev->add_option("--truth", truth, "Ground-truth mask")->required();
  ev->add_option("--output,-o", output, "Metrics key=value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (seg->parsed()) return cmd_segment(in, pf, output, out);
    if (max->parsed()) return cmd_maxima(in, pf, output, out);
    if (base->parsed()) return cmd_baseline(in, bf, output, out);
    if (syn->parsed()) return cmd_synth(sf, output, out);
    if (sw->parsed()) return cmd_sweep(in, pf, deltas, output, out);
    if (ev->parsed()) return cmd_eval(in.input, truth, output, out);
  } catch (const StageError& e) {
    err << "error in stage " << e.what() << '\n';
    return kExitFailure;
  } catch (const CommandError& e) {
    err << "error in stage " << e.stage << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace delamseg::cli
