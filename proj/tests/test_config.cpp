#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mugi/experiment.hpp"

using namespace mugi;
using nlohmann::json;

namespace {

json minimal_config() {
  return json::parse(R"({
    "designs": [
      { "id": "mugi128", "type": "mugi", "height": 128 },
      { "id": "sa16", "type": "systolic", "height": 16 }
    ],
    "runs": [
      { "id": "r0", "model": "llama2-7b", "batch": 4, "phase": "decode", "seqLen": 256 }
    ],
    "carbon": { "intensityPerJoule": 1.0e-4, "perAreaMm2": 1.0 },
    "outputDir": "out/test"
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parses and resolves") {
  const ExperimentConfig cfg = parse_config(minimal_config());
  CHECK(cfg.designs.size() == 2);
  CHECK(cfg.runs.size() == 1);
  CHECK(std::holds_alternative<ArrayConfig>(cfg.design_by_id("mugi128").cfg));
  CHECK(std::get<BaselineConfig>(cfg.design_by_id("sa16").cfg).kind == BaselineKind::Systolic);
}

TEST_CASE("unknown keys are fail-fast and named") {
  json j = minimal_config();
  j["runs"][0]["batchh"] = 3;
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("batchh") != std::string::npos);
  }
}

TEST_CASE("config validation errors") {
  SECTION("carbon is required") {
    json j = minimal_config();
    j.erase("carbon");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("mesh shape restricted") {
    json j = minimal_config();
    j["noc"] = {{"meshRows", 3}, {"meshCols", 3}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("duplicate design ids rejected") {
    json j = minimal_config();
    j["designs"][1]["id"] = "mugi128";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("normalize target must resolve") {
    json j = minimal_config();
    j["normalizeTo"] = "nope";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("sweep ranges enforced") {
    json j = minimal_config();
    j["sweep"] = {{"batch", {64}}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j["sweep"] = {{"height", {16}}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("mugi height range") {
    json j = minimal_config();
    j["designs"][0]["height"] = 16;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SECTION("batch range") {
    json j = minimal_config();
    j["runs"][0]["batch"] = 33;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
}

TEST_CASE("empty runs produce header-only reports") {
  json j = minimal_config();
  j["runs"] = json::array();
  j["outputDir"] = "out/test_empty";
  ExperimentConfig cfg = parse_config(j);
  const ExperimentResults res = run_experiment(cfg);
  CHECK(res.rows.empty());
  const std::string csv = slurp("out/test_empty/report.csv");
  CHECK(csv.rfind("design,run,", 0) == 0);
  CHECK(csv.find('\n') == csv.size() - 1);  // only the header line
}

TEST_CASE("single design single run emits one row") {
  json j = minimal_config();
  j["designs"] = json::array({json{{"id", "mugi128"}, {"type", "mugi"}, {"height", 128}}});
  j["outputDir"] = "out/test_single";
  const ExperimentResults res = run_experiment(parse_config(j));
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].cost.throughput_tokens_s > 0.0);
}

TEST_CASE("baseline rows normalize to exactly one") {
  json j = minimal_config();
  j["normalizeTo"] = "sa16";
  j["outputDir"] = "out/test_norm";
  const ExperimentResults res = run_experiment(parse_config(j));
  const ExperimentRow* base = res.baseline_for("r0");
  REQUIRE(base != nullptr);
  CHECK(base->cost.throughput_tokens_s / base->cost.throughput_tokens_s == 1.0);
  const std::string csv = slurp("out/test_norm/report.csv");
  CHECK(csv.find("sa16,r0") != std::string::npos);
  // The sa16 row's normalized throughput column is exactly 1.
  std::istringstream lines(csv);
  std::string line;
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("sa16,r0,", 0) == 0) {
      CHECK(line.substr(line.size() - 6) == ",1,1,1");
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  json j = minimal_config();
  j["workers"] = 4;
  j["verifyFunctional"] = true;
  for (const char* dir : {"out/test_det_a", "out/test_det_b"}) {
    ExperimentConfig cfg = parse_config(j);
    cfg.output_dir = dir;
    run_experiment(cfg);
  }
  for (const char* f : {"report.csv", "latency_breakdown.csv", "carbon.csv", "ops.json"}) {
    CHECK(slurp(std::filesystem::path("out/test_det_a") / f) ==
          slurp(std::filesystem::path("out/test_det_b") / f));
  }
}

TEST_CASE("sweep expansion") {
  json j = minimal_config();
  j["sweep"] = {{"batch", {1, 8}}, {"height", {32, 64}}};
  const ExperimentConfig cfg = parse_config(j);
  const ExperimentResults res = run_experiment_in_memory(cfg);
  // designs: mugi128 expands to 2 heights, sa16 stays; runs: 2 batches.
  CHECK(res.rows.size() == 3 * 2);
}

TEST_CASE("functional verification passes on the default seed") {
  CHECK(verify_functional(1));
  CHECK(verify_functional(999));
}
