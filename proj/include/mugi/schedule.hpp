#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mugi/perf.hpp"

namespace mugi {

struct Design {
  std::string id;
  std::variant<ArrayConfig, BaselineConfig> cfg;

  double frequency_hz() const {
    return std::holds_alternative<ArrayConfig>(cfg) ? std::get<ArrayConfig>(cfg).frequency_hz
                                                    : std::get<BaselineConfig>(cfg).frequency_hz;
  }
};

// Off-chip traffic of one op instance. Weights (or the quantized KV cache)
// stream once per op; activations in, results out.
struct OpBytes {
  int64_t weights = 0;
  int64_t inputs = 0;
  int64_t outputs = 0;

  int64_t total() const { return weights + inputs + outputs; }
};

inline OpBytes op_bytes(const Op& op) {
  OpBytes b;
  if (is_gemm(op.kind)) {
    if (op.weights_quantized) {
      b.weights = op.m * op.k / 2 + op.m * ceil_div(op.k, op.quant_group) * 2;  // INT4 + scales
    } else {
      b.weights = op.m * op.k * 2;
    }
    b.inputs = op.k * op.n * 2;
    b.outputs = op.m * op.n * 2;
  } else {
    b.inputs = op.elements * 2;
    b.outputs = op.elements * 2;
    b.weights = 16 * kArrayWidth * 2;  // LUT window load
  }
  return b;
}

// Smallest working set each double-buffer half must hold to stream an op.
// When even that does not fit, the transfer serializes with compute.
inline bool buffers_fit(const ArrayConfig& cfg, const Op& op) {
  if (is_gemm(op.kind)) {
    const int64_t weight_chunk = static_cast<int64_t>(cfg.height) * 8 * cfg.weight_word_bits / 8;
    const int64_t input_chunk = 8LL * kArrayWidth * cfg.input_word_bits / 8;
    const int64_t output_tile = static_cast<int64_t>(cfg.height) * kArrayWidth * 2;
    return weight_chunk <= cfg.wsram_bytes / 2 && input_chunk <= cfg.isram_bytes / 2 &&
           output_tile <= cfg.osram_bytes / 2;
  }
  const int64_t window_bits = 16LL * kArrayWidth * cfg.input_word_bits;
  return window_bits / 8 <= cfg.isram_bytes / 2;
}

struct ScheduledOp {
  Op op;
  OpTiming timing;          // one instance on one node, the latency view
  EventCounts events;       // one instance; energy scales by op.repeat
  int64_t total_cycles = 0; // whole op across repeats after the compute/transfer max
};

struct ScheduleResult {
  std::string design_id;
  std::vector<ScheduledOp> ops;
  int64_t total_cycles = 0;
  double frequency_hz = 0.0;
  double wall_seconds() const { return total_cycles / frequency_hz; }
};

namespace detail {

// Mugi-path event counting; the VLP baselines share it.
inline EventCounts vlp_gemm_events(const ArrayConfig& cfg, const Op& op) {
  EventCounts e;
  const int64_t tiles_m = ceil_div(op.m, cfg.height);
  const int64_t tiles_n = ceil_div(op.n, kArrayWidth);
  e.subscriptions = op.k * op.m * tiles_n;  // one per row per window
  e.tc_conversions = e.subscriptions;
  e.accumulator_ops = 8 * op.k * op.n * tiles_m;  // 8 adds per window per active column
  const int64_t groups = op.quant_group > 0 ? ceil_div(op.k, op.quant_group) : 0;
  e.vector_macs = groups * op.m * op.n;
  e.wsram_bits = op.k * op.m * tiles_n * cfg.weight_word_bits +
                 op.m * (op.quant_group > 0 ? ceil_div(op.k, op.quant_group) : 0) * 16 * tiles_n;
  e.isram_bits = op.k * op.n * tiles_m * cfg.input_word_bits;
  e.osram_bits = op.m * op.n * 16;
  e.dram_bytes = op_bytes(op).total();
  return e;
}

inline EventCounts vlp_nonlinear_events(const ArrayConfig& cfg, const Op& op) {
  EventCounts e;
  const int64_t slots = static_cast<int64_t>(cfg.height) * kArrayWidth;
  const int64_t mappings = ceil_div(op.elements, slots);
  e.subscriptions = 2 * op.elements;  // mantissa row latch + exponent select
  e.tc_conversions = op.elements;
  e.isram_bits = mappings * 8 * kArrayWidth * cfg.input_word_bits;  // window row stream
  e.osram_bits = op.elements * 16;
  if (op.kind == OpKind::Softmax) {
    e.accumulator_ops = op.elements;       // oAcc running sum
    e.vector_macs = 2 * op.elements;       // subtract-max + normalization passes
  }
  e.dram_bytes = op_bytes(op).total();
  return e;
}

inline EventCounts baseline_gemm_events(const BaselineConfig& cfg, const Op& op) {
  if (is_vlp_baseline(cfg.kind)) return vlp_gemm_events(vlp_array_view(cfg), op);
  EventCounts e;
  e.mac_ops = op.m * op.n * op.k;
  const int64_t groups = op.quant_group > 0 ? ceil_div(op.k, op.quant_group) : 0;
  e.vector_macs = groups * op.m * op.n;
  e.wsram_bits = op.m * op.k * (op.weights_quantized ? 4 : 16);
  e.isram_bits = op.k * op.n * 16 * ceil_div(op.m, cfg.height);
  e.osram_bits = op.m * op.n * 16;
  e.dram_bytes = op_bytes(op).total();
  return e;
}

inline EventCounts baseline_nonlinear_events(const BaselineConfig& cfg, const Op& op) {
  EventCounts e;
  if (cfg.kind == BaselineKind::MugiL) {
    e.isram_bits = op.elements * 16;  // one lookup per element
  } else {
    e.vector_macs = op.elements * cfg.vector_unit.stages();
  }
  if (op.kind == OpKind::Softmax) e.vector_macs += 2 * op.elements;
  e.osram_bits = op.elements * 16;
  e.dram_bytes = op_bytes(op).total();
  return e;
}

}  // namespace detail

// Distributes an op's total work units (tiles, blocks, or elements, across
// every repeat) evenly over the mesh nodes; the op finishes with the most
// loaded node. Fill/drain depth is paid once per op, since repeats stream
// through the same mapping back to back. Transfers overlap compute under
// double buffering, so the op takes max(compute, transfer) unless even the
// minimal streaming chunk does not fit on chip.
inline ScheduledOp schedule_op(const Design& design, const NocConfig& noc, const Op& op) {
  const int nodes = noc.nodes();
  ScheduledOp s;
  s.op = op;

  const bool softmax = op.kind == OpKind::Softmax;
  bool fits = true;
  int64_t compute = 0;

  if (const auto* arr = std::get_if<ArrayConfig>(&design.cfg)) {
    fits = buffers_fit(*arr, op);
    if (is_gemm(op.kind)) {
      s.timing = mugi_gemm_timing(*arr, op.m, op.n, op.k, op.quant_group);
      const int64_t tiles = ceil_div(op.m, arr->height) * ceil_div(op.n, kArrayWidth);
      const int64_t per_node = ceil_div(tiles * op.repeat, nodes);
      const int64_t groups = op.quant_group > 0 ? ceil_div(op.k, op.quant_group) : 0;
      compute = mugi_gemm_cycles_for_tiles(*arr, per_node, op.k, groups);
      s.events = detail::vlp_gemm_events(*arr, op);
    } else {
      const int64_t el_node = ceil_div(op.elements, nodes);
      s.timing = mugi_nonlinear_timing(*arr, el_node, softmax);
      const int64_t slots = static_cast<int64_t>(arr->height) * kArrayWidth;
      compute = ceil_div(el_node, slots) * op.repeat * 8 + arr->nonlinear_depth();
      if (softmax) compute += op.repeat * (2 * ceil_div(el_node, arr->vector_lanes) + 1);
      s.events = detail::vlp_nonlinear_events(*arr, op);
    }
  } else {
    const auto& base = std::get<BaselineConfig>(design.cfg);
    if (is_gemm(op.kind)) {
      s.timing = baseline_gemm_timing(base, op.m, op.n, op.k, op.quant_group);
      s.events = detail::baseline_gemm_events(base, op);
      const int64_t h = base.height;
      if (is_vlp_baseline(base.kind)) {
        fits = buffers_fit(vlp_array_view(base), op);
        const int64_t tiles = ceil_div(op.m, h) * ceil_div(op.n, kArrayWidth);
        const int64_t per_node = ceil_div(tiles * op.repeat, nodes);
        const int64_t groups = op.quant_group > 0 ? ceil_div(op.k, op.quant_group) : 0;
        compute = mugi_gemm_cycles_for_tiles(vlp_array_view(base), per_node, op.k, groups);
      } else if (base.kind == BaselineKind::TensorCore) {
        const int64_t blocks = ceil_div(op.m, 8) * ceil_div(op.n, 16) * ceil_div(op.k, 16);
        compute = ceil_div(blocks * op.repeat, nodes) + base.pipeline_depth;
      } else {
        const int64_t blocks = ceil_div(op.k, h) * ceil_div(op.m, h);
        const int64_t per_node = ceil_div(blocks * op.repeat, nodes);
        compute = (per_node - 1) * std::max(op.n, h) + op.n + 2 * h;
      }
    } else {
      const int64_t el_node = ceil_div(op.elements, nodes);
      s.timing = baseline_nonlinear_timing(base, el_node, softmax);
      s.events = detail::baseline_nonlinear_events(base, op);
      if (base.kind == BaselineKind::MugiL) {
        compute = ceil_div(el_node, base.height) * op.repeat + base.pipeline_depth;
      } else {
        VectorUnitConfig vu = base.vector_unit;
        if (base.kind == BaselineKind::PreciseVector) vu.kind = VectorUnitConfig::Kind::Precise;
        if (base.kind == BaselineKind::PwlVector) vu.kind = VectorUnitConfig::Kind::Pwl;
        if (base.kind == BaselineKind::TaylorVector) vu.kind = VectorUnitConfig::Kind::Taylor;
        const int64_t rounds = ceil_div(el_node, vu.lanes);
        if (vu.kind == VectorUnitConfig::Kind::Precise)
          compute = rounds * op.repeat * vu.precise_cycles;
        else
          compute = vu.stages() + rounds * op.repeat - 1;
        if (softmax) compute += op.repeat * (2 * rounds + 1);
      }
    }
  }

  const OpBytes bytes = op_bytes(op);
  s.timing.mem_bytes_read = bytes.weights + bytes.inputs;
  s.timing.mem_bytes_written = bytes.outputs;
  const double freq = design.frequency_hz();
  const auto transfer_cycles = static_cast<int64_t>(std::ceil(
      static_cast<double>(bytes.total()) * op.repeat / noc.offchip_bytes_per_sec * freq));
  if (nodes > 1) {
    const int avg_hops = (noc.mesh_rows + noc.mesh_cols) / 2;
    s.events.noc_byte_hops = bytes.total() * avg_hops;
  }
  if (fits) {
    s.total_cycles = std::max(compute, transfer_cycles);
    s.timing.bound = transfer_cycles > compute ? Bound::Memory : Bound::Compute;
  } else {
    s.total_cycles = compute + transfer_cycles;
    s.timing.bound = Bound::Memory;
  }
  return s;
}

inline ScheduleResult schedule(const Design& design, const NocConfig& noc, const OpGraph& graph) {
  ScheduleResult r;
  r.design_id = design.id;
  r.frequency_hz = design.frequency_hz();
  for (const auto& op : graph.ops) {
    ScheduledOp s = schedule_op(design, noc, op);
    r.total_cycles += s.total_cycles;
    r.ops.push_back(std::move(s));
  }
  return r;
}

}  // namespace mugi
