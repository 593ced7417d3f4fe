#include <doctest.h>

#include "delamseg/config.hpp"
#include "delamseg/error.hpp"

using namespace delamseg;

TEST_CASE("key=value grammar") {
  const KeyValues kv = KeyValues::parse("# comment\n\n a.b = 1.5 \nc=x\n");
  CHECK(kv.get("a.b") == "1.5");
  CHECK(kv.get_double("a.b") == 1.5);
  CHECK(kv.get("c") == "x");
  CHECK_FALSE(kv.contains("d"));
  CHECK_THROWS(kv.get("d"));
  CHECK_THROWS(kv.get_int("c"));
}

TEST_CASE("duplicate keys and missing '=' name the line") {
  try {
    KeyValues::parse("a=1\nb=2\na=3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(KeyValues::parse("novalue\n"), ParseError);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(apply_config(KeyValues::parse("diffusion.sigmaa=2\n")), ParseError);
}

TEST_CASE("defaults survive a round trip") {
  const RunConfig def;
  const KeyValues kv = to_key_values(def);
  CHECK(kv.get("extraction.h_in") == "0.5");
  CHECK(kv.get("extraction.delta") == "0.1");
  CHECK(kv.get("diffusion.sigma") == "3.4");
  CHECK(kv.get("diffusion.kappa") == "auto");
  const RunConfig back = apply_config(KeyValues::parse(kv.format()));
  CHECK(to_key_values(back).format() == kv.format());
}

TEST_CASE("every key applies and round-trips") {
  const std::string text =
      "diffusion.sigma=2\ndiffusion.kappa=0.3\ndiffusion.tau=0.1\ndiffusion.iterations=5\n"
      "gradient.sigma=1.5\nextraction.h_in=0.7\nextraction.delta=0.15\n"
      "extraction.connectivity=4\nextraction.plateau_eps=1e-7\nextraction.q_threshold=0.02\n"
      "extraction.patience=4\nextraction.stability=on\nextraction.max_steps=12\n"
      "extraction.weight_source=raw\nreference.min_area=40\nbands.mean_halfwidth=0.6\n"
      "bands.cv_low=0.4\nbands.cv_high=2\nio.exclusion_mask=paint.pgm\n";
  const RunConfig cfg = apply_config(KeyValues::parse(text));
  const PipelineConfig& p = cfg.pipeline;
  CHECK(p.diffusion.sigma == 2.0);
  CHECK(p.diffusion.kappa == 0.3);
  CHECK(p.diffusion.iterations == 5);
  CHECK(p.gradient_sigma == 1.5);
  CHECK(p.extraction.connectivity == Connectivity::Four);
  CHECK(p.extraction.morph.se == StructuringElement::cross());
  CHECK(p.extraction.stability.enabled);
  CHECK(p.extraction.max_steps_override == 12);
  CHECK(p.weight_source == WeightSource::Raw);
  CHECK(p.ref.min_area == 40);
  CHECK(p.bands.cv_high_factor == 2.0);
  CHECK(cfg.exclusion_mask_path == "paint.pgm");
  const RunConfig again = apply_config(to_key_values(cfg));
  CHECK(to_key_values(again).format() == to_key_values(cfg).format());
}

TEST_CASE("embedded report keys re-apply") {
  KeyValues kv = to_key_values(RunConfig{}, "config.");
  kv.set("report.mask_area", "12");
  const RunConfig back = apply_config(kv);
  CHECK(to_key_values(back).format() == to_key_values(RunConfig{}).format());
}
