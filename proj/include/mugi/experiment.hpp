#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <json.hpp>

#include "mugi/approx.hpp"
#include "mugi/config.hpp"
#include "mugi/cost.hpp"
#include "mugi/gemm.hpp"
#include "mugi/softmax.hpp"

namespace mugi {

struct ExperimentRow {
  std::string design_id;
  std::string run_id;
  RunSpec run;
  ScheduleResult sched;
  CostReport cost;
  // Latency shares by op family, of the end-to-end cycles.
  double proj_share = 0.0, attn_share = 0.0, ffn_share = 0.0, nonlinear_share = 0.0;
};

struct ExperimentResults {
  std::vector<ExperimentRow> rows;
  std::string normalize_to;
  bool functional_ok = true;

  const ExperimentRow* baseline_for(const std::string& run_id) const {
    for (const auto& r : rows)
      if (r.design_id == normalize_to && r.run_id == run_id) return &r;
    return nullptr;
  }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::vector<RunSpec> expand_runs(const ExperimentConfig& cfg) {
  std::vector<RunSpec> out;
  for (const RunSpec& base : cfg.runs) {
    const auto& batches = cfg.sweep.batches.empty() ? std::vector<int>{base.batch} : cfg.sweep.batches;
    const auto& lens = cfg.sweep.seq_lens.empty() ? std::vector<int>{base.seq_len} : cfg.sweep.seq_lens;
    for (int b : batches)
      for (int l : lens) {
        RunSpec r = base;
        r.batch = b;
        r.seq_len = l;
        if (b != base.batch || l != base.seq_len)
          r.id = base.id + "-b" + std::to_string(b) + "-s" + std::to_string(l);
        out.push_back(std::move(r));
      }
  }
  return out;
}

inline std::vector<Design> expand_designs(const ExperimentConfig& cfg) {
  if (cfg.sweep.heights.empty()) return cfg.designs;
  std::vector<Design> out;
  for (const Design& base : cfg.designs) {
    const auto* arr = std::get_if<ArrayConfig>(&base.cfg);
    const auto* b = std::get_if<BaselineConfig>(&base.cfg);
    const bool sweepable = arr != nullptr || (b != nullptr && is_vlp_baseline(b->kind));
    if (!sweepable) {
      out.push_back(base);
      continue;
    }
    for (int h : cfg.sweep.heights) {
      Design d = base;
      d.id = base.id + "-h" + std::to_string(h);
      if (arr) std::get<ArrayConfig>(d.cfg).height = h;
      else std::get<BaselineConfig>(d.cfg).height = h;
      out.push_back(std::move(d));
    }
  }
  return out;
}

inline void accumulate_shares(ExperimentRow& row) {
  const double total = static_cast<double>(row.sched.total_cycles);
  if (total <= 0) return;
  for (const auto& s : row.sched.ops) {
    const double share = static_cast<double>(s.total_cycles) / total;
    switch (s.op.kind) {
      case OpKind::ProjGemm: row.proj_share += share; break;
      case OpKind::AttnQkGemm:
      case OpKind::AttnPvGemm: row.attn_share += share; break;
      case OpKind::FfnGemm: row.ffn_share += share; break;
      default: row.nonlinear_share += share; break;
    }
  }
}

}  // namespace detail

// Seeded functional smoke pass: the value-level model against plain
// floating-point references. Catches wiring regressions before a long sweep.
inline bool verify_functional(uint64_t seed) {
  std::mt19937 rng(static_cast<uint32_t>(seed));
  std::uniform_int_distribution<int> val(-7, 7);
  std::normal_distribution<float> act(0.0f, 2.0f);

  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 5, n = 1 + trial % 7, k = 8;
    Int4Matrix w(m, k, 4);
    Bf16Matrix x(k, n);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < k; ++c) w.at(r, c) = Int4(val(rng));
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < n; ++c) x.at(r, c) = bf16_from_float(act(rng));
    const Bf16Matrix out = gemm(w, x, 8);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) {
        double ref = 0.0;
        for (int kk = 0; kk < k; ++kk)
          ref += static_cast<double>(to_float(w.scale_at(r, kk / 4))) * w.at(r, kk).value *
                 to_float(x.at(kk, c));
        if (std::fabs(to_float(out.at(r, c)) - ref) > 0.02 * std::max(1.0, std::fabs(ref)))
          return false;
      }
  }

  const Lut lut = build_lut(NonlinearKind::Exp, {-6, 5, false});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Bf16> xs(64);
    for (auto& v : xs) v = bf16_from_float(act(rng));
    const auto out = softmax(xs, lut);
    float sum = 0.0f;
    for (const Bf16 o : out) sum += to_float(o);
    if (std::fabs(sum - 1.0f) > 0.015625f) return false;
  }
  return true;
}

inline ExperimentResults run_experiment_in_memory(const ExperimentConfig& cfg) {
  ExperimentResults results;
  const std::vector<Design> designs = detail::expand_designs(cfg);
  const std::vector<RunSpec> runs = detail::expand_runs(cfg);
  results.normalize_to = cfg.normalize_to.empty() ? designs.front().id : cfg.normalize_to;
  results.functional_ok = !cfg.verify_functional || verify_functional(cfg.seed);

  struct Point {
    const Design* design;
    const RunSpec* run;
  };
  std::vector<Point> points;
  for (const auto& d : designs)
    for (const auto& r : runs) points.push_back({&d, &r});

  results.rows.resize(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
      const Point& p = points[i];
      ExperimentRow row;
      row.design_id = p.design->id;
      row.run_id = p.run->id;
      row.run = *p.run;
      const OpGraph graph = build_graph(*p.run);
      row.sched = schedule(*p.design, cfg.noc, graph);
      row.cost = cost_report(row.sched, *p.design, cfg.noc, cfg.cost_table, cfg.carbon, graph);
      detail::accumulate_shares(row);
      results.rows[i] = std::move(row);
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(points.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return results;
}

inline void write_reports(const ExperimentResults& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  using detail::fmt;

  {
    std::ofstream csv(out_dir + "/report.csv");
    csv << "design,run,model,batch,phase,seqLen,totalCycles,wallSeconds,tokensPerS,"
           "areaMm2,chipAreaMm2,energyJ,avgPowerW,energyPerTokenUj,energyEff,powerEff,"
           "operationalCarbonG,embodiedCarbonG,normTokensPerS,normEnergyEff,normPowerEff\n";
    for (const auto& r : results.rows) {
      const ExperimentRow* base = results.baseline_for(r.run_id);
      auto norm = [&](double v, double b) { return base && b > 0 ? v / b : 0.0; };
      csv << r.design_id << ',' << r.run_id << ',' << r.run.model.name << ',' << r.run.batch
          << ',' << (r.run.phase == Phase::Decode ? "decode" : "prefill") << ',' << r.run.seq_len
          << ',' << r.sched.total_cycles << ',' << fmt(r.sched.wall_seconds()) << ','
          << fmt(r.cost.throughput_tokens_s) << ',' << fmt(r.cost.area_mm2) << ','
          << fmt(r.cost.chip_area_mm2) << ',' << fmt(r.cost.energy_j) << ','
          << fmt(r.cost.avg_power_w) << ',' << fmt(r.cost.energy_per_token_uj) << ','
          << fmt(r.cost.energy_eff) << ',' << fmt(r.cost.power_eff) << ','
          << fmt(r.cost.operational_carbon_g) << ',' << fmt(r.cost.embodied_carbon_g) << ','
          << fmt(norm(r.cost.throughput_tokens_s, base ? base->cost.throughput_tokens_s : 0)) << ','
          << fmt(norm(r.cost.energy_eff, base ? base->cost.energy_eff : 0)) << ','
          << fmt(norm(r.cost.power_eff, base ? base->cost.power_eff : 0)) << '\n';
    }
  }

  {
    std::ofstream csv(out_dir + "/latency_breakdown.csv");
    csv << "design,run,projShare,attnShare,ffnShare,nonlinearShare\n";
    for (const auto& r : results.rows)
      csv << r.design_id << ',' << r.run_id << ',' << fmt(r.proj_share) << ','
          << fmt(r.attn_share) << ',' << fmt(r.ffn_share) << ',' << fmt(r.nonlinear_share) << '\n';
  }

  {
    std::ofstream csv(out_dir + "/carbon.csv");
    csv << "design,run,operationalCarbonG,embodiedCarbonG,totalCarbonG\n";
    for (const auto& r : results.rows)
      csv << r.design_id << ',' << r.run_id << ',' << fmt(r.cost.operational_carbon_g) << ','
          << fmt(r.cost.embodied_carbon_g) << ','
          << fmt(r.cost.operational_carbon_g + r.cost.embodied_carbon_g) << '\n';
  }

  {
    // Per-op timing trace: one record per op with shape, cycles, bound,
    // and utilization.
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results.rows) {
      nlohmann::json ops = nlohmann::json::array();
      for (const auto& s : r.sched.ops) {
        ops.push_back({{"name", s.op.name},
                       {"kind", name_of(s.op.kind)},
                       {"m", s.op.m},
                       {"n", s.op.n},
                       {"k", s.op.k},
                       {"elements", s.op.elements},
                       {"repeat", s.op.repeat},
                       {"cycles", s.total_cycles},
                       {"computeCycles", s.timing.cycles},
                       {"busyCycles", s.timing.busy_cycles},
                       {"bound", s.timing.bound == Bound::Memory ? "memory" : "compute"},
                       {"utilization", s.timing.utilization},
                       {"columnUtilization", s.timing.column_utilization},
                       {"memBytesRead", s.timing.mem_bytes_read},
                       {"memBytesWritten", s.timing.mem_bytes_written}});
      }
      j.push_back({{"design", r.design_id},
                   {"run", r.run_id},
                   {"totalCycles", r.sched.total_cycles},
                   {"functionalChecks", results.functional_ok},
                   {"unmodeled", "rope, layer norm, residual adds, swiglu product"},
                   {"ops", std::move(ops)}});
    }
    std::ofstream out(out_dir + "/ops.json");
    out << j.dump(2) << '\n';
  }
}

inline ExperimentResults run_experiment(const ExperimentConfig& cfg) {
  ExperimentResults results = run_experiment_in_memory(cfg);
  write_reports(results, cfg.output_dir);
  return results;
}

// ---------------------------------------------------------------------------
// Error curves
// ---------------------------------------------------------------------------

struct ErrorPoint {
  double input = 0.0;
  double relative_error = 0.0;
};

// Relative error of the approximation against the double-precision
// reference, sampled over [lo, hi]. Symmetric form |a-f|/max(|f|,|a|), so
// the input-rounding bound |x|*2^-4 is exact. Underflow-path samples report
// 100% (the flush convention); the sliding window is chosen from the
// samples the way a mapping would.
inline std::vector<ErrorPoint> error_curve(NonlinearKind kind, LutWindow window, double lo,
                                           double hi, int samples,
                                           WindowPolicy policy = WindowPolicy::AlignMax) {
  if (samples < 2) throw std::invalid_argument("error curve needs at least 2 samples");
  const Lut lut = build_lut(kind, window);

  std::vector<Bf16> xs(samples);
  std::vector<SplitInput> split(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    xs[i] = bf16_from_double(x);
    split[i] = split_and_round(xs[i]);
  }
  const auto stats = exponent_stats(split);
  const SlidingWindow sw = stats ? select_window(lut, *stats, policy) : default_window(lut);

  std::vector<ErrorPoint> out(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = to_float(xs[i]);
    const ApproxResult r = approximate_one(xs[i], sw, kind);
    out[i].input = x;
    const bool underflowed =
        r.path == ApproxPath::Clamp && split[i].special == Special::None &&
        clamp_exponent(split[i], sw).kind == ClampKind::Underflow;
    if (underflowed) {
      out[i].relative_error = 1.0;
      continue;
    }
    const double f = reference_eval(kind, x);
    const double a = to_float(r.value);
    const double denom = std::max(std::fabs(f), std::fabs(a));
    out[i].relative_error = denom == 0.0 ? 0.0 : std::fabs(a - f) / denom;
  }
  return out;
}

inline void write_error_curve(const std::vector<ErrorPoint>& curve, const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open " + path);
  csv << "input,relativeError\n";
  for (const auto& p : curve) csv << detail::fmt(p.input) << ',' << detail::fmt(p.relative_error) << '\n';
}

}  // namespace mugi
