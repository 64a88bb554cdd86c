#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mugi/cost.hpp"
#include "mugi/schedule.hpp"

namespace mugi {

// Raised for any config problem; the message names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Strict object view: every key must be consumed, unknown keys are errors.
class StrictObject {
 public:
  StrictObject(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  T require(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing key '" + key + "'");
    used_.insert(key);
    return get_as<T>(key);
  }

  template <typename T>
  T value_or(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    used_.insert(key);
    return get_as<T>(key);
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const nlohmann::json& child(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  std::string path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }

 private:
  template <typename T>
  T get_as(const std::string& key) {
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(path_ + ": key '" + key + "' has the wrong type");
    }
  }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline BaselineKind baseline_kind_from(const std::string& type, const std::string& path) {
  if (type == "systolic") return BaselineKind::Systolic;
  if (type == "simd") return BaselineKind::Simd;
  if (type == "systolic_figna") return BaselineKind::SystolicFigna;
  if (type == "simd_figna") return BaselineKind::SimdFigna;
  if (type == "tensor") return BaselineKind::TensorCore;
  if (type == "carat") return BaselineKind::Carat;
  if (type == "precise_vector") return BaselineKind::PreciseVector;
  if (type == "pwl_vector") return BaselineKind::PwlVector;
  if (type == "taylor_vector") return BaselineKind::TaylorVector;
  if (type == "mugi_l") return BaselineKind::MugiL;
  throw ConfigError(path + ": unknown design type '" + type + "'");
}

inline VectorUnitConfig parse_vector_unit(const nlohmann::json& j, const std::string& path) {
  StrictObject o(j, path);
  VectorUnitConfig vu;
  const std::string kind = o.value_or<std::string>("kind", "precise");
  if (kind == "precise") vu.kind = VectorUnitConfig::Kind::Precise;
  else if (kind == "pwl") vu.kind = VectorUnitConfig::Kind::Pwl;
  else if (kind == "taylor") vu.kind = VectorUnitConfig::Kind::Taylor;
  else throw ConfigError(path + ": unknown vector unit kind '" + kind + "'");
  vu.lanes = o.value_or<int>("lanes", 16);
  vu.precise_cycles = o.value_or<int>("preciseCycles", 44);
  vu.pwl_segments = o.value_or<int>("pwlSegments", 22);
  vu.taylor_degrees = o.value_or<int>("taylorDegrees", 9);
  o.finish();
  if (vu.lanes < 1) throw ConfigError(path + ": key 'lanes' must be positive");
  return vu;
}

inline Design parse_design(const nlohmann::json& j, const std::string& path) {
  StrictObject o(j, path);
  Design d;
  d.id = o.require<std::string>("id");
  const std::string type = o.require<std::string>("type");
  const int height = o.value_or<int>("height", type == "mugi" ? 128 : 16);
  const auto isram = o.value_or<int64_t>("isramBytes", 64 * 1024);
  const auto wsram = o.value_or<int64_t>("wsramBytes", 64 * 1024);
  const auto osram = o.value_or<int64_t>("osramBytes", 64 * 1024);
  const double freq = o.value_or<double>("frequencyHz", 400e6);
  const int pipe = o.value_or<int>("pipelineDepth", 4);
  const int lanes = o.value_or<int>("vectorLanes", 8);

  if (type == "mugi") {
    if (height < 32 || height > 256)
      throw ConfigError(path + ": mugi height must be in [32, 256]");
    ArrayConfig a;
    a.height = height;
    a.isram_bytes = isram;
    a.wsram_bytes = wsram;
    a.osram_bytes = osram;
    a.frequency_hz = freq;
    a.pipeline_depth = pipe;
    a.vector_lanes = lanes;
    d.cfg = a;
    o.finish();
    return d;
  }

  BaselineConfig b;
  b.kind = baseline_kind_from(type, path);
  if ((b.kind == BaselineKind::Carat || b.kind == BaselineKind::MugiL) &&
      (height < 32 || height > 256))
    throw ConfigError(path + ": " + type + " height must be in [32, 256]");
  if ((b.kind == BaselineKind::Systolic || b.kind == BaselineKind::Simd ||
       b.kind == BaselineKind::SystolicFigna || b.kind == BaselineKind::SimdFigna) &&
      (height < 4 || height > 64))
    throw ConfigError(path + ": " + type + " height must be in [4, 64]");
  b.height = height;
  b.isram_bytes = isram;
  b.wsram_bytes = wsram;
  b.osram_bytes = osram;
  b.frequency_hz = freq;
  b.pipeline_depth = pipe;
  b.vector_lanes = lanes;
  if (o.has("vectorUnit")) b.vector_unit = parse_vector_unit(o.child("vectorUnit"), path + ".vectorUnit");
  d.cfg = b;
  o.finish();
  return d;
}

inline RunSpec parse_run(const nlohmann::json& j, const std::string& path) {
  StrictObject o(j, path);
  RunSpec r;
  r.id = o.require<std::string>("id");
  r.model = model_by_name(o.require<std::string>("model"));
  r.batch = o.value_or<int>("batch", 1);
  const std::string phase = o.value_or<std::string>("phase", "decode");
  if (phase == "decode") r.phase = Phase::Decode;
  else if (phase == "prefill") r.phase = Phase::Prefill;
  else throw ConfigError(path + ": unknown phase '" + phase + "'");
  r.seq_len = o.value_or<int>("seqLen", r.model.seq_len);
  if (o.has("quant")) {
    StrictObject q(o.child("quant"), path + ".quant");
    r.quant.weights_int4 = q.value_or<bool>("weightsInt4", true);
    r.quant.kv_int4 = q.value_or<bool>("kvInt4", true);
    r.quant.group_size = q.value_or<int>("groupSize", 128);
    q.finish();
  }
  o.finish();
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return r;
}

inline CostTable parse_cost_table(const nlohmann::json& j, const std::string& path) {
  StrictObject o(j, path);
  CostTable t;
  StrictObject comps(o.child("components"), path + ".components");
  for (auto it = o.child("components").begin(); it != o.child("components").end(); ++it) {
    StrictObject c(comps.child(it.key()), path + ".components." + it.key());
    ComponentCost cc;
    cc.area_mm2 = c.value_or<double>("areaMm2", 0.0);
    cc.energy_pj = c.value_or<double>("energyPj", 0.0);
    cc.leakage_mw = c.value_or<double>("leakageMw", 0.0);
    c.finish();
    if (cc.area_mm2 < 0 || cc.energy_pj < 0 || cc.leakage_mw < 0)
      throw ConfigError(path + ".components." + it.key() + ": costs must be non-negative");
    t.components[it.key()] = cc;
  }
  comps.finish();
  o.finish();
  return t;
}

}  // namespace detail

struct SweepSpec {
  std::vector<int> batches;
  std::vector<int> seq_lens;
  std::vector<int> heights;
};

struct ExperimentConfig {
  std::vector<Design> designs;
  std::vector<RunSpec> runs;
  NocConfig noc;
  CostTable cost_table = default_cost_table();
  CarbonParams carbon;
  SweepSpec sweep;
  std::string output_dir = "out";
  std::string normalize_to;  // design id; empty = first design
  uint64_t seed = 1;
  int workers = 1;
  bool verify_functional = false;

  const Design& design_by_id(const std::string& id) const {
    for (const auto& d : designs)
      if (d.id == id) return d;
    throw ConfigError("unknown design id '" + id + "'");
  }
};

inline ExperimentConfig parse_config(const nlohmann::json& root) {
  detail::StrictObject o(root, "config");
  ExperimentConfig cfg;

  if (!o.has("designs")) throw ConfigError("config: missing key 'designs'");
  const auto& designs = o.child("designs");
  if (!designs.is_array()) throw ConfigError("config.designs: expected an array");
  std::set<std::string> ids;
  for (size_t i = 0; i < designs.size(); ++i) {
    cfg.designs.push_back(detail::parse_design(designs[i], "config.designs[" + std::to_string(i) + "]"));
    if (!ids.insert(cfg.designs.back().id).second)
      throw ConfigError("config.designs: duplicate id '" + cfg.designs.back().id + "'");
  }
  if (cfg.designs.empty()) throw ConfigError("config.designs: must not be empty");

  if (o.has("runs")) {
    const auto& runs = o.child("runs");
    if (!runs.is_array()) throw ConfigError("config.runs: expected an array");
    std::set<std::string> run_ids;
    for (size_t i = 0; i < runs.size(); ++i) {
      cfg.runs.push_back(detail::parse_run(runs[i], "config.runs[" + std::to_string(i) + "]"));
      if (!run_ids.insert(cfg.runs.back().id).second)
        throw ConfigError("config.runs: duplicate id '" + cfg.runs.back().id + "'");
    }
  }

  if (o.has("noc")) {
    detail::StrictObject n(o.child("noc"), "config.noc");
    cfg.noc.mesh_rows = n.value_or<int>("meshRows", 1);
    cfg.noc.mesh_cols = n.value_or<int>("meshCols", 1);
    cfg.noc.frequency_hz = n.value_or<double>("frequencyHz", 400e6);
    cfg.noc.offchip_bytes_per_sec = n.value_or<double>("offchipBytesPerSec", 256e9);
    n.finish();
    const std::pair<int, int> shape{cfg.noc.mesh_rows, cfg.noc.mesh_cols};
    const std::pair<int, int> allowed[] = {{1, 1}, {2, 1}, {2, 2}, {4, 4}, {8, 8}};
    bool ok = false;
    for (const auto& a : allowed) ok = ok || shape == a;
    if (!ok) throw ConfigError("config.noc: mesh shape must be one of 1x1, 2x1, 2x2, 4x4, 8x8");
  }

  {
    // Carbon parameters are required inputs; there is no defensible default.
    detail::StrictObject c(o.child("carbon"), "config.carbon");
    cfg.carbon.intensity_g_per_j = c.require<double>("intensityPerJoule");
    cfg.carbon.per_area_g_per_mm2 = c.require<double>("perAreaMm2");
    c.finish();
    try {
      cfg.carbon.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.carbon: ") + e.what());
    }
  }

  if (o.has("costTable")) {
    const auto& ct = o.child("costTable");
    if (ct.is_string()) {
      const std::string path = ct.get<std::string>();
      std::ifstream in(path);
      if (!in) throw ConfigError("config.costTable: cannot open '" + path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config.costTable: parse error in '" + path + "': " + e.what());
      }
      cfg.cost_table = detail::parse_cost_table(j, "costTable(" + path + ")");
    } else {
      cfg.cost_table = detail::parse_cost_table(ct, "config.costTable");
    }
  }

  if (o.has("sweep")) {
    detail::StrictObject s(o.child("sweep"), "config.sweep");
    cfg.sweep.batches = s.value_or<std::vector<int>>("batch", {});
    cfg.sweep.seq_lens = s.value_or<std::vector<int>>("seqLen", {});
    cfg.sweep.heights = s.value_or<std::vector<int>>("height", {});
    s.finish();
    for (int b : cfg.sweep.batches)
      if (b < 1 || b > 32) throw ConfigError("config.sweep.batch: values must be in [1, 32]");
    for (int l : cfg.sweep.seq_lens)
      if (l < 128 || l > 4096) throw ConfigError("config.sweep.seqLen: values must be in [128, 4096]");
    for (int h : cfg.sweep.heights)
      if (h < 32 || h > 256) throw ConfigError("config.sweep.height: values must be in [32, 256]");
  }

  cfg.output_dir = o.value_or<std::string>("outputDir", "out");
  cfg.normalize_to = o.value_or<std::string>("normalizeTo", "");
  cfg.seed = o.value_or<uint64_t>("seed", 1);
  cfg.workers = o.value_or<int>("workers", 1);
  cfg.verify_functional = o.value_or<bool>("verifyFunctional", false);
  o.finish();

  if (cfg.workers < 1) throw ConfigError("config.workers: must be positive");
  if (!cfg.normalize_to.empty()) cfg.design_by_id(cfg.normalize_to);  // must resolve
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_config(j);
}

}  // namespace mugi
