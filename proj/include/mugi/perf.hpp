#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mugi/bf16.hpp"
#include "mugi/workload.hpp"

namespace mugi {

inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

// Mugi node geometry and clocking (Table-style configuration).
struct ArrayConfig {
  int height = 128;  // H rows; width is fixed at kArrayWidth
  int64_t isram_bytes = 64 * 1024;
  int64_t wsram_bytes = 64 * 1024;
  int64_t osram_bytes = 64 * 1024;
  int input_word_bits = 16;
  int weight_word_bits = 4;
  double frequency_hz = 400e6;
  int pipeline_depth = 4;  // register stages beyond the subscriptions
  int vector_lanes = 8;

  // Fill depth of one nonlinear pass: mantissa window, exponent window,
  // column stagger, plus the configured register stages.
  int nonlinear_depth() const { return 8 + 8 + 7 + pipeline_depth; }
  // GEMM windows are counted in the stream itself; only stagger and
  // register stages remain.
  int gemm_depth() const { return 7 + pipeline_depth; }
};

enum class BaselineKind {
  Systolic,
  Simd,
  SystolicFigna,
  SimdFigna,
  TensorCore,
  Carat,
  PreciseVector,
  PwlVector,
  TaylorVector,
  MugiL,
};

inline const char* name_of(BaselineKind k) {
  switch (k) {
    case BaselineKind::Systolic: return "systolic";
    case BaselineKind::Simd: return "simd";
    case BaselineKind::SystolicFigna: return "systolic_figna";
    case BaselineKind::SimdFigna: return "simd_figna";
    case BaselineKind::TensorCore: return "tensor";
    case BaselineKind::Carat: return "carat";
    case BaselineKind::PreciseVector: return "precise_vector";
    case BaselineKind::PwlVector: return "pwl_vector";
    case BaselineKind::TaylorVector: return "taylor_vector";
    case BaselineKind::MugiL: return "mugi_l";
  }
  return "?";
}

// Vector array attached to a design for nonlinear operations.
struct VectorUnitConfig {
  enum class Kind { Precise, Pwl, Taylor };
  Kind kind = Kind::Precise;
  int lanes = 16;
  int precise_cycles = 44;  // blocking MAC sequence per element
  int pwl_segments = 22;
  int taylor_degrees = 9;

  // Pipeline stage count for the fully pipelined approximations: one MAC
  // stage plus the segment compare tree for PWL; one Horner MAC per degree
  // for Taylor.
  int stages() const {
    switch (kind) {
      case Kind::Precise: return precise_cycles;
      case Kind::Pwl: return 1 + static_cast<int>(std::ceil(std::log2(pwl_segments)));
      case Kind::Taylor: return taylor_degrees;
    }
    return 1;
  }
};

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Systolic;
  int height = 16;  // H: systolic/SIMD are H x H; Carat/Mugi-L are H x 8
  int64_t isram_bytes = 64 * 1024;
  int64_t wsram_bytes = 64 * 1024;
  int64_t osram_bytes = 64 * 1024;
  double frequency_hz = 400e6;
  int pipeline_depth = 4;
  int vector_lanes = 8;  // dequantization lanes for the VLP designs
  VectorUnitConfig vector_unit;
};

struct NocConfig {
  int mesh_rows = 1;
  int mesh_cols = 1;
  double frequency_hz = 400e6;
  double offchip_bytes_per_sec = 256e9;

  int nodes() const { return mesh_rows * mesh_cols; }
};

enum class Bound { Compute, Memory };

struct OpTiming {
  int64_t cycles = 0;       // total latency including fill/drain
  int64_t busy_cycles = 0;  // cycles with the array streaming
  double utilization = 0.0;
  double column_utilization = 0.0;
  int64_t mem_bytes_read = 0;
  int64_t mem_bytes_written = 0;
  Bound bound = Bound::Compute;
};

// Per-op activity counters consumed by the cost model. Counts are for one
// op instance; the schedule scales by the op's repeat.
struct EventCounts {
  int64_t subscriptions = 0;    // PE temporal subscriptions
  int64_t tc_conversions = 0;   // temporal converter activations
  int64_t accumulator_ops = 0;  // output accumulator adds
  int64_t mac_ops = 0;          // multiplier-based PEs (baselines)
  int64_t vector_macs = 0;      // vector unit operations
  int64_t isram_bits = 0;
  int64_t wsram_bits = 0;
  int64_t osram_bits = 0;
  int64_t dram_bytes = 0;
  int64_t noc_byte_hops = 0;
};

// ---------------------------------------------------------------------------
// Mugi array closed forms
// ---------------------------------------------------------------------------

// One mapping of H x 8 elements per 8-cycle initiation interval. Softmax
// charges the vector unit for the max-subtract pass, the normalization
// pass, and one sum store; those passes depend on the array result and do
// not overlap.
inline OpTiming mugi_nonlinear_timing(const ArrayConfig& cfg, int64_t elements, bool softmax) {
  if (elements < 1) throw std::invalid_argument("nonlinear element count");
  const int64_t slots = static_cast<int64_t>(cfg.height) * kArrayWidth;
  const int64_t mappings = ceil_div(elements, slots);
  OpTiming t;
  t.busy_cycles = mappings * 8;
  t.cycles = t.busy_cycles + cfg.nonlinear_depth();
  if (softmax) t.cycles += 2 * ceil_div(elements, cfg.vector_lanes) + 1;
  t.utilization = static_cast<double>(elements) / static_cast<double>(mappings * slots);
  t.column_utilization = 1.0;
  return t;
}

// Stream and drain time for a given number of output-stationary tiles.
// Dequantization runs on the vector unit against outputs draining through
// the oFIFO, so it only bounds the op when the vector rate is insufficient.
inline int64_t mugi_gemm_cycles_for_tiles(const ArrayConfig& cfg, int64_t tiles, int64_t k,
                                          int64_t groups) {
  const int64_t stream = tiles * 8 * k;
  const int64_t tile_outputs = static_cast<int64_t>(cfg.height) * kArrayWidth;
  const int64_t dequant =
      groups > 0 ? tiles * ceil_div(tile_outputs * groups, cfg.vector_lanes) : 0;
  return std::max(stream, dequant) + cfg.gemm_depth();
}

// Output-stationary tiles of H x 8 outputs; one 8-cycle temporal window per
// K index. Ragged tiles run at full tile latency.
inline OpTiming mugi_gemm_timing(const ArrayConfig& cfg, int64_t m, int64_t n, int64_t k,
                                 int quant_group) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  const int64_t tiles_m = ceil_div(m, cfg.height);
  const int64_t tiles_n = ceil_div(n, kArrayWidth);
  const int64_t tiles = tiles_m * tiles_n;
  const int64_t groups = quant_group > 0 ? ceil_div(k, quant_group) : 0;
  const int64_t tile_outputs = static_cast<int64_t>(cfg.height) * kArrayWidth;
  OpTiming t;
  t.busy_cycles = tiles * 8 * k;
  t.cycles = mugi_gemm_cycles_for_tiles(cfg, tiles, k, groups);
  t.utilization = static_cast<double>(m * n) / static_cast<double>(tiles * tile_outputs);
  t.column_utilization = static_cast<double>(n) / static_cast<double>(tiles_n * kArrayWidth);
  return t;
}

// ---------------------------------------------------------------------------
// Baseline closed forms
// ---------------------------------------------------------------------------

// Weight-stationary H x H array. Each K-slab/M-block holds a weight tile for
// max(N, H) cycles: N streaming cycles, floored by the H-cycle weight reload
// (the reload port is the bottleneck at small batch, which is where the
// under-utilization of larger arrays comes from). Fill and drain cost one
// array traversal each.
inline OpTiming systolic_gemm_timing(const BaselineConfig& cfg, int64_t m, int64_t n, int64_t k) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  const int64_t h = cfg.height;
  const int64_t blocks = ceil_div(k, h) * ceil_div(m, h);
  OpTiming t;
  t.cycles = (blocks - 1) * std::max(n, h) + n + 2 * h;
  t.busy_cycles = blocks * n;  // streaming cycles
  t.utilization = static_cast<double>(m * n * k) / (static_cast<double>(t.cycles) * h * h);
  t.column_utilization = static_cast<double>(std::min(n, h)) / static_cast<double>(h);
  return t;
}

// Fully pipelined 8x16x16 MAC block per cycle.
inline OpTiming tensor_gemm_timing(const BaselineConfig& cfg, int64_t m, int64_t n, int64_t k) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  const int64_t blocks = ceil_div(m, 8) * ceil_div(n, 16) * ceil_div(k, 16);
  OpTiming t;
  t.busy_cycles = blocks;
  t.cycles = blocks + cfg.pipeline_depth;
  t.utilization = static_cast<double>(m * n * k) / (static_cast<double>(blocks) * 8 * 16 * 16);
  t.column_utilization = static_cast<double>(std::min<int64_t>(n, 16)) / 16.0;
  return t;
}

// Vector array nonlinear. The precise MAC sequence blocks for its full
// per-element latency; PWL and Taylor are fully pipelined with one element
// per lane per cycle at steady state. Softmax adds a sum pass, a
// normalization pass, and one sum store, as on Mugi.
inline OpTiming vector_nonlinear_timing(const VectorUnitConfig& cfg, int64_t elements,
                                        bool softmax) {
  if (elements < 1) throw std::invalid_argument("nonlinear element count");
  const int64_t rounds = ceil_div(elements, cfg.lanes);
  OpTiming t;
  if (cfg.kind == VectorUnitConfig::Kind::Precise) {
    t.busy_cycles = rounds * cfg.precise_cycles;
    t.cycles = t.busy_cycles;
  } else {
    t.busy_cycles = rounds;
    t.cycles = cfg.stages() + rounds - 1;
  }
  if (softmax) t.cycles += 2 * rounds + 1;
  t.utilization =
      static_cast<double>(elements) / (static_cast<double>(rounds) * cfg.lanes);
  t.column_utilization = t.utilization;
  return t;
}

// Dedicated-LUT variant: H lookup ports, 8 inputs sharing each LUT.
inline OpTiming mugil_nonlinear_timing(const BaselineConfig& cfg, int64_t elements) {
  if (elements < 1) throw std::invalid_argument("nonlinear element count");
  const int64_t rounds = ceil_div(elements, cfg.height);
  OpTiming t;
  t.busy_cycles = rounds;
  t.cycles = rounds + cfg.pipeline_depth;
  t.utilization = static_cast<double>(elements) / (static_cast<double>(rounds) * cfg.height);
  t.column_utilization = 1.0;
  return t;
}

inline ArrayConfig vlp_array_view(const BaselineConfig& cfg) {
  ArrayConfig a;
  a.height = cfg.height;
  a.isram_bytes = cfg.isram_bytes;
  a.wsram_bytes = cfg.wsram_bytes;
  a.osram_bytes = cfg.osram_bytes;
  a.frequency_hz = cfg.frequency_hz;
  a.pipeline_depth = cfg.pipeline_depth;
  a.vector_lanes = cfg.vector_lanes;
  return a;
}

inline bool is_vlp_baseline(BaselineKind k) {
  return k == BaselineKind::Carat || k == BaselineKind::MugiL;
}

inline bool is_vector_only(BaselineKind k) {
  return k == BaselineKind::PreciseVector || k == BaselineKind::PwlVector ||
         k == BaselineKind::TaylorVector;
}

// Per-shape dispatch across baseline kinds.
inline OpTiming baseline_gemm_timing(const BaselineConfig& cfg, int64_t m, int64_t n, int64_t k,
                                     int quant_group) {
  switch (cfg.kind) {
    case BaselineKind::Systolic:
    case BaselineKind::Simd:
    case BaselineKind::SystolicFigna:
    case BaselineKind::SimdFigna:
      return systolic_gemm_timing(cfg, m, n, k);
    case BaselineKind::TensorCore:
      return tensor_gemm_timing(cfg, m, n, k);
    case BaselineKind::Carat:
    case BaselineKind::MugiL:
      return mugi_gemm_timing(vlp_array_view(cfg), m, n, k, quant_group);
    default:
      throw std::invalid_argument(std::string(name_of(cfg.kind)) + " does not support GEMM");
  }
}

inline OpTiming baseline_nonlinear_timing(const BaselineConfig& cfg, int64_t elements,
                                          bool softmax) {
  switch (cfg.kind) {
    case BaselineKind::MugiL:
      return mugil_nonlinear_timing(cfg, elements);
    case BaselineKind::PreciseVector:
    case BaselineKind::PwlVector:
    case BaselineKind::TaylorVector: {
      VectorUnitConfig vu = cfg.vector_unit;
      vu.kind = cfg.kind == BaselineKind::PreciseVector  ? VectorUnitConfig::Kind::Precise
                : cfg.kind == BaselineKind::PwlVector    ? VectorUnitConfig::Kind::Pwl
                                                         : VectorUnitConfig::Kind::Taylor;
      return vector_nonlinear_timing(vu, elements, softmax);
    }
    default:
      // Systolic/SIMD/FIGNA/tensor/Carat run nonlinears on their attached
      // vector unit.
      return vector_nonlinear_timing(cfg.vector_unit, elements, softmax);
  }
}

}  // namespace mugi
