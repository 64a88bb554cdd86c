// Command-line front end: validate configs, run sweeps, and dump the
// intermediate artifacts (LUTs, op graphs, error curves).

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mugi/config.hpp"
#include "mugi/experiment.hpp"
#include "mugi/lut_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

mugi::NonlinearKind kind_from(const std::string& name) {
  using mugi::NonlinearKind;
  if (name == "exp") return NonlinearKind::Exp;
  if (name == "silu") return NonlinearKind::Silu;
  if (name == "gelu") return NonlinearKind::Gelu;
  if (name == "gelu_tanh") return NonlinearKind::GeluTanh;
  if (name == "gelu_fast") return NonlinearKind::GeluFast;
  throw mugi::ConfigError("unknown nonlinear kind '" + name + "'");
}

void dump_graph_text(const mugi::OpGraph& g, std::ostream& os) {
  os << "run " << g.run_id << " phase " << (g.phase == mugi::Phase::Decode ? "decode" : "prefill")
     << " batch " << g.batch << "\n";
  for (const auto& op : g.ops) {
    os << "  " << op.name << " kind=" << name_of(op.kind);
    if (is_gemm(op.kind)) {
      os << " m=" << op.m << " n=" << op.n << " k=" << op.k
         << (op.weights_quantized ? " int4" : " bf16");
      if (op.weights_quantized) os << " group=" << op.quant_group;
    } else {
      os << " elements=" << op.elements;
    }
    os << " repeat=" << op.repeat << "\n";
  }
  os << "  total_macs=" << g.total_macs() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value-level-parallelism accelerator model for LLM inference"};
  app.require_subcommand(1);

  std::string config_path, out_dir, out_path;
  int workers = 0;
  uint64_t seed = 0;
  bool have_seed = false;

  auto* validate = app.add_subcommand("validate", "check a config file and exit");
  validate->add_option("--config", config_path, "config file")->required();

  auto* run = app.add_subcommand("run", "run the configured sweep and write reports");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--output-dir", out_dir, "override the config output directory");
  run->add_option("--workers", workers, "override the worker count");
  run->add_option("--seed", seed, "override the seed")->each([&](const std::string&) { have_seed = true; });

  std::string kind_name = "exp";
  int min_exp = -3, max_exp = 4, samples = 1601;
  bool signed_inputs = true;
  double range_lo = -16.0, range_hi = 0.0;
  std::string policy_name = "alignmax";

  auto* curve = app.add_subcommand("error-curve", "emit (input, relativeError) CSV");
  curve->add_option("--kind", kind_name, "exp|silu|gelu|gelu_tanh|gelu_fast");
  curve->add_option("--min-exp", min_exp, "LUT window minimum exponent");
  curve->add_option("--max-exp", max_exp, "LUT window maximum exponent");
  curve->add_flag("--signed,!--unsigned", signed_inputs, "store rows for both signs");
  curve->add_option("--lo", range_lo, "sweep range low end");
  curve->add_option("--hi", range_hi, "sweep range high end");
  curve->add_option("--samples", samples, "sample count");
  curve->add_option("--policy", policy_name, "alignmax|alignmin");
  curve->add_option("--out", out_path, "output CSV path")->required();

  auto* dump_lut_cmd = app.add_subcommand("dump-lut", "write a LUT artifact");
  dump_lut_cmd->add_option("--kind", kind_name, "exp|silu|gelu|gelu_tanh|gelu_fast");
  dump_lut_cmd->add_option("--min-exp", min_exp, "window minimum exponent");
  dump_lut_cmd->add_option("--max-exp", max_exp, "window maximum exponent");
  dump_lut_cmd->add_flag("--signed,!--unsigned", signed_inputs, "store rows for both signs");
  dump_lut_cmd->add_option("--out", out_path, "output path")->required();

  std::string model_name = "llama2-7b", phase_name = "decode";
  int batch = 1, seq_len = 4096, group_size = 128;
  auto* dump_graph_cmd = app.add_subcommand("dump-graph", "print the op graph for a run");
  dump_graph_cmd->add_option("--model", model_name, "model preset name");
  dump_graph_cmd->add_option("--batch", batch, "batch size");
  dump_graph_cmd->add_option("--phase", phase_name, "decode|prefill");
  dump_graph_cmd->add_option("--seq-len", seq_len, "sequence length / decode position");
  dump_graph_cmd->add_option("--group-size", group_size, "quantization group size");
  dump_graph_cmd->add_option("--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      mugi::load_config(config_path);
      std::cout << "config ok: " << config_path << "\n";
      return kExitOk;
    }
    if (run->parsed()) {
      mugi::ExperimentConfig cfg = mugi::load_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (workers > 0) cfg.workers = workers;
      if (have_seed) cfg.seed = seed;
      const mugi::ExperimentResults results = mugi::run_experiment(cfg);
      std::cout << "wrote " << results.rows.size() << " rows to " << cfg.output_dir << "\n";
      if (!results.functional_ok) {
        std::cerr << "functional verification failed\n";
        return kExitRuntime;
      }
      return kExitOk;
    }
    if (curve->parsed()) {
      const auto policy = policy_name == "alignmin" ? mugi::WindowPolicy::AlignMin
                                                    : mugi::WindowPolicy::AlignMax;
      const auto points = mugi::error_curve(kind_from(kind_name),
                                            {min_exp, max_exp, signed_inputs}, range_lo,
                                            range_hi, samples, policy);
      mugi::write_error_curve(points, out_path);
      std::cout << "wrote " << points.size() << " samples to " << out_path << "\n";
      return kExitOk;
    }
    if (dump_lut_cmd->parsed()) {
      const mugi::Lut lut = mugi::build_lut(kind_from(kind_name), {min_exp, max_exp, signed_inputs});
      mugi::dump_lut(lut, out_path);
      std::cout << "wrote " << lut.row_count() << "x" << lut.window().width() << " LUT to "
                << out_path << "\n";
      return kExitOk;
    }
    if (dump_graph_cmd->parsed()) {
      mugi::RunSpec run_spec;
      run_spec.id = model_name + "-b" + std::to_string(batch);
      run_spec.model = mugi::model_by_name(model_name);
      run_spec.batch = batch;
      if (phase_name == "decode") run_spec.phase = mugi::Phase::Decode;
      else if (phase_name == "prefill") run_spec.phase = mugi::Phase::Prefill;
      else throw mugi::ConfigError("unknown phase '" + phase_name + "'");
      run_spec.seq_len = seq_len;
      run_spec.quant.group_size = group_size;
      const mugi::OpGraph g = mugi::build_graph(run_spec);
      if (out_path.empty()) {
        dump_graph_text(g, std::cout);
      } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open " + out_path);
        dump_graph_text(g, os);
      }
      return kExitOk;
    }
  } catch (const mugi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
