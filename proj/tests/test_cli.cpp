#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "delamseg/config.hpp"
#include "delamseg/raster_io.hpp"
#include "delamseg/synth.hpp"
#include "fixtures.hpp"

using namespace delamseg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "delamseg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = delamseg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "delamseg_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string spec_text() {
  SceneSpec s;
  s.width = 80;
  s.height = 64;
  s.background = fixtures::ramp(20.0, 0.02);
  s.blobs = {fixtures::plateau(24, 32, 10, 1.5, 0.8), fixtures::plateau(58, 32, 10, 2.5, 0.8)};
  s.noise_std = 0.05;
  s.seed = 1;
  return format_scene_spec(s);
}

fs::path make_scene(const fs::path& dir) {
  write_file_atomic(dir / "two_blob.spec", spec_text());
  REQUIRE(invoke({"synth", "--spec", (dir / "two_blob.spec").string(), "--seed", "42"}).code == 0);
  return dir / "two_blob.csv";
}

}  // namespace

TEST_CASE("segment writes mask and reports with default parameters") {
  const fs::path d = workdir("segment");
  const fs::path scene = make_scene(d);
  const fs::path mask = d / "mask.pgm";
  const Run r = invoke({"segment", "--input", scene.string(), "--output", mask.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(mask));
  const std::string text = read_file(d / "mask.pgm.report.txt");
  CHECK(text.find("h_in = 0.5 C, delta = 0.1 C") != std::string::npos);
  const KeyValues kv = KeyValues::parse(read_file(d / "mask.pgm.report.kv"));
  CHECK(kv.get("config.extraction.h_in") == "0.5");
  CHECK(kv.get("config.extraction.delta") == "0.1");
  CHECK(kv.get("report.subset_law") == "true");
}

TEST_CASE("synth twice gives byte-identical files") {
  const fs::path d = workdir("synth");
  write_file_atomic(d / "two_blob.spec", spec_text());
  const std::string spec = (d / "two_blob.spec").string();
  REQUIRE(invoke({"synth", "--spec", spec, "--seed", "42"}).code == 0);
  const std::string raster1 = read_file(d / "two_blob.csv");
  const std::string truth1 = read_file(d / "two_blob.truth.pgm");
  REQUIRE(invoke({"synth", "--spec", spec, "--seed", "42"}).code == 0);
  CHECK(read_file(d / "two_blob.csv") == raster1);
  CHECK(read_file(d / "two_blob.truth.pgm") == truth1);
  REQUIRE(invoke({"synth", "--spec", spec, "--seed", "43"}).code == 0);
  CHECK(read_file(d / "two_blob.csv") != raster1);
}

TEST_CASE("sweep emits five rows with a zero reference diff") {
  const fs::path d = workdir("sweep");
  const fs::path scene = make_scene(d);
  const fs::path out = d / "sweep.csv";
  REQUIRE(invoke({"sweep", "--input", scene.string(), "--deltas", "0.05,0.1,0.15,0.2,0.3",
               "--output", out.string()})
              .code == 0);
  std::istringstream csv(read_file(out));
  std::vector<std::string> lines;
  for (std::string l; std::getline(csv, l);) lines.push_back(l);
  REQUIRE(lines.size() == 6);
  CHECK(lines[1].rfind("0.05,", 0) == 0);
  CHECK(lines[1].find(",0,") != std::string::npos);
}

TEST_CASE("embedded config reproduces the mask bit-exactly") {
  const fs::path d = workdir("roundtrip");
  const fs::path scene = make_scene(d);
  REQUIRE(invoke({"segment", "--input", scene.string(), "--output", (d / "a.pgm").string(),
               "--h-in", "0.6", "--delta", "0.15", "--sigma", "2.5", "--min-area", "20",
               "--bands", "0.6,0.45,2.0", "--connectivity", "4"})
              .code == 0);
  REQUIRE(invoke({"segment", "--input", scene.string(), "--output", (d / "b.pgm").string(),
               "--config", (d / "a.pgm.report.kv").string()})
              .code == 0);
  CHECK(read_file(d / "a.pgm") == read_file(d / "b.pgm"));
  const KeyValues kv = KeyValues::parse(read_file(d / "b.pgm.report.kv"));
  CHECK(kv.get("config.extraction.h_in") == "0.6");
  CHECK(kv.get("config.extraction.connectivity") == "4");
  CHECK(kv.get("config.bands.cv_high") == "2");
}

TEST_CASE("flags override the config file") {
  const fs::path d = workdir("override");
  const fs::path scene = make_scene(d);
  write_file_atomic(d / "cfg.txt", "extraction.h_in=0.9\nextraction.delta=0.2\n");
  REQUIRE(invoke({"segment", "--input", scene.string(), "--output", (d / "m.csv").string(),
               "--config", (d / "cfg.txt").string(), "--delta", "0.3"})
              .code == 0);
  const KeyValues kv = KeyValues::parse(read_file(d / "m.csv.report.kv"));
  CHECK(kv.get("config.extraction.h_in") == "0.9");
  CHECK(kv.get("config.extraction.delta") == "0.3");
}

TEST_CASE("maxima, baseline and eval commands") {
  const fs::path d = workdir("others");
  const fs::path scene = make_scene(d);
  REQUIRE(invoke({"maxima", "--input", scene.string(), "--output", (d / "u.pgm").string()}).code == 0);
  CHECK(fs::exists(d / "u.pgm.steps.csv"));
  REQUIRE(invoke({"baseline", "--input", scene.string(), "--output", (d / "k.pgm").string()}).code ==
          0);
  REQUIRE(invoke({"baseline", "--input", scene.string(), "--output", (d / "t.pgm").string(),
               "--method", "threshold", "--value", "21.5"})
              .code == 0);
  CHECK(invoke({"baseline", "--input", scene.string(), "--output", (d / "t.pgm").string(),
             "--method", "percentile"})
            .code == 1);
  const Run e = invoke({"eval", "--input", (d / "u.pgm").string(), "--truth",
                     (d / "two_blob.truth.pgm").string(), "--output", (d / "m.kv").string()});
  REQUIRE(e.code == 0);
  const KeyValues kv = KeyValues::parse(read_file(d / "m.kv"));
  CHECK(kv.get_double("iou") > 0.0);
  CHECK(kv.get_double("recall") > 0.5);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"segment", "--input", "x.csv", "--output", "y.pgm", "--bogus"}).code == 2);
  CHECK(invoke({"segment", "--input", "x.csv", "--output", "y.pgm", "--connectivity", "6"}).code ==
        2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("stage failures exit 1 with the stage name") {
  const fs::path d = workdir("failures");
  const Run missing = invoke({"segment", "--input", (d / "none.csv").string(), "--output",
                           (d / "m.pgm").string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("stage input") != std::string::npos);

  const fs::path scene = make_scene(d);
  const Run bad = invoke({"segment", "--input", scene.string(), "--output", (d / "m.pgm").string(),
                       "--delta", "0.01"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("stage config") != std::string::npos);

  write_file_atomic(d / "flat.csv", "1,1,1\n1,1,1\n1,1,1\n");
  CHECK(invoke({"segment", "--input", (d / "flat.csv").string(), "--output",
             (d / "flat.pgm").string()})
            .code == 0);
}

TEST_CASE("installed binary honors the exit-code contract") {
  const std::string bin = DELAMSEG_CLI_PATH;
  REQUIRE(fs::exists(bin));
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status(bin + " --help") == 0);
  CHECK(status(bin + " segment --nope") == 2);
  CHECK(status(bin + " segment --input /nonexistent.csv --output /tmp/x.pgm") == 1);
}
