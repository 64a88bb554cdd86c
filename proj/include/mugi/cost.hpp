#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mugi/schedule.hpp"

namespace mugi {

// Per-component cost record. Area and leakage are per instance (per bit for
// the bit-granular components); energy is per event.
struct ComponentCost {
  double area_mm2 = 0.0;
  double energy_pj = 0.0;
  double leakage_mw = 0.0;
};

struct CostTable {
  std::map<std::string, ComponentCost> components;

  const ComponentCost& at(const std::string& name) const {
    auto it = components.find(name);
    if (it == components.end()) throw std::out_of_range("missing component entry: " + name);
    return it->second;
  }
};

struct CarbonParams {
  double intensity_g_per_j = 0.0;   // CI
  double per_area_g_per_mm2 = 0.0;  // CPA

  void validate() const {
    if (intensity_g_per_j <= 0.0 || per_area_g_per_mm2 <= 0.0)
      throw std::invalid_argument("carbon parameters must be positive");
  }
};

// Operational and embodied CO2-equivalent grams.
struct CarbonReport {
  double operational_g = 0.0;
  double embodied_g = 0.0;
};

inline CarbonReport carbon_of(double energy_j, double area_mm2, const CarbonParams& p) {
  p.validate();
  return {energy_j * p.intensity_g_per_j, area_mm2 * p.per_area_g_per_mm2};
}

// ---------------------------------------------------------------------------
// Component inventory
// ---------------------------------------------------------------------------

struct InventoryItem {
  std::string component;
  double count = 0.0;
  std::string category;  // array | buffer | sram | vector | noc
};

// Buffer microstructure, in 16-bit FIFO entries. Mugi broadcasts across rows
// and leans the two OR-tree output FIFOs into one; Carat pipelines inputs
// through double-buffered per-PE staging and double-buffers the OR-tree
// output, plus staging between the accumulators and the FIFOs.
inline constexpr int kMugiOutputFifoDepth = 8;
inline constexpr int kCaratInputEntriesPerRow = 2 * kArrayWidth;
inline constexpr int kCaratOutputEntriesPerRow = 2 * kMugiOutputFifoDepth + 4;
// Column stagger iFIFO: column c delays by c cycles.
inline constexpr int kStaggerEntries = kArrayWidth * (kArrayWidth - 1) / 2;
// Mugi-L programmable LUT storage per shared-LUT instance, in entries.
inline constexpr int kMugilLutEntries = 16 * 12;

inline std::string sram_class(int64_t bytes) {
  return bytes >= 512 * 1024 ? "sram_1m_bit" : "sram_64k_bit";
}

namespace detail {

inline void add_srams(std::vector<InventoryItem>& inv, int64_t isram, int64_t wsram,
                      int64_t osram) {
  inv.push_back({sram_class(isram), static_cast<double>(isram) * 8, "sram"});
  inv.push_back({sram_class(wsram), static_cast<double>(wsram) * 8, "sram"});
  inv.push_back({sram_class(osram), static_cast<double>(osram) * 8, "sram"});
}

inline void add_vector_unit(std::vector<InventoryItem>& inv, const VectorUnitConfig& vu) {
  inv.push_back({"vector_mac", static_cast<double>(vu.lanes), "vector"});
  double coeff_bits = 0.0;
  if (vu.kind == VectorUnitConfig::Kind::Pwl) coeff_bits = vu.pwl_segments * 2.0 * 16;
  if (vu.kind == VectorUnitConfig::Kind::Taylor) coeff_bits = vu.taylor_degrees * 16.0;
  if (coeff_bits > 0) inv.push_back({"fifo_bit", coeff_bits * vu.lanes, "vector"});
}

inline void add_vlp_core(std::vector<InventoryItem>& inv, int height, bool carat_buffers) {
  const double h = height;
  inv.push_back({"mproc", h, "array"});
  inv.push_back({"tc", h, "array"});
  inv.push_back({"pp", h, "array"});
  inv.push_back({"or_tree", h, "array"});
  inv.push_back({"pe", h * kArrayWidth, "array"});
  inv.push_back({"acc", static_cast<double>(kArrayWidth), "array"});
  inv.push_back({"eproc", 1.0, "array"});
  inv.push_back({"sw", 1.0, "array"});
  if (carat_buffers) {
    inv.push_back({"fifo_bit",
                   h * (kCaratInputEntriesPerRow + kCaratOutputEntriesPerRow) * 16, "buffer"});
  } else {
    inv.push_back({"fifo_bit", (h * kMugiOutputFifoDepth + kStaggerEntries) * 16, "buffer"});
  }
}

}  // namespace detail

// Per-node component inventory of a design. Area, leakage, and the buffer
// ratio all derive from this single breakdown.
inline std::vector<InventoryItem> design_inventory(const Design& design) {
  std::vector<InventoryItem> inv;
  if (const auto* arr = std::get_if<ArrayConfig>(&design.cfg)) {
    detail::add_vlp_core(inv, arr->height, /*carat_buffers=*/false);
    inv.push_back({"vector_mac", static_cast<double>(arr->vector_lanes), "vector"});
    detail::add_srams(inv, arr->isram_bytes, arr->wsram_bytes, arr->osram_bytes);
    return inv;
  }
  const auto& base = std::get<BaselineConfig>(design.cfg);
  const double h = base.height;
  switch (base.kind) {
    case BaselineKind::Carat:
      detail::add_vlp_core(inv, base.height, /*carat_buffers=*/true);
      detail::add_vector_unit(inv, base.vector_unit);
      break;
    case BaselineKind::MugiL:
      detail::add_vlp_core(inv, base.height, /*carat_buffers=*/false);
      inv.push_back({"fifo_bit", h * kMugilLutEntries * 16, "array"});  // shared LUT storage
      inv.push_back({"vector_mac", static_cast<double>(base.vector_lanes), "vector"});
      break;
    case BaselineKind::Systolic:
    case BaselineKind::SystolicFigna:
      inv.push_back({base.kind == BaselineKind::Systolic ? "mac_pe" : "figna_pe", h * h, "array"});
      inv.push_back({"acc", h, "array"});
      inv.push_back({"control", 1.0, "array"});
      detail::add_vector_unit(inv, base.vector_unit);
      break;
    case BaselineKind::Simd:
    case BaselineKind::SimdFigna:
      inv.push_back({base.kind == BaselineKind::Simd ? "mac_pe" : "figna_pe", h * h, "array"});
      inv.push_back({"adder", h * (h - 1), "array"});
      detail::add_vector_unit(inv, base.vector_unit);
      break;
    case BaselineKind::TensorCore:
      inv.push_back({"tensor_mac", 8.0 * 16 * 16, "array"});
      detail::add_vector_unit(inv, base.vector_unit);
      break;
    case BaselineKind::PreciseVector:
    case BaselineKind::PwlVector:
    case BaselineKind::TaylorVector:
      detail::add_vector_unit(inv, base.vector_unit);
      break;
  }
  detail::add_srams(inv, base.isram_bytes, base.wsram_bytes, base.osram_bytes);
  return inv;
}

struct AreaBreakdown {
  double total_mm2 = 0.0;
  std::map<std::string, double> by_category;

  double of(const std::string& category) const {
    auto it = by_category.find(category);
    return it == by_category.end() ? 0.0 : it->second;
  }
};

// Array-level (per node) area.
inline AreaBreakdown area_of(const Design& design, const CostTable& table) {
  AreaBreakdown b;
  for (const auto& item : design_inventory(design)) {
    const double a = table.at(item.component).area_mm2 * item.count;
    b.by_category[item.category] += a;
    b.total_mm2 += a;
  }
  return b;
}

inline double buffer_area_of(const Design& design, const CostTable& table) {
  return area_of(design, table).of("buffer");
}

// Chip-level area: all mesh nodes plus their routers.
inline double chip_area_of(const Design& design, const NocConfig& noc, const CostTable& table) {
  const double node = area_of(design, table).total_mm2;
  double routers = 0.0;
  if (noc.nodes() > 1) routers = noc.nodes() * table.at("noc_router").area_mm2;
  return node * noc.nodes() + routers;
}

inline double leakage_w_of(const Design& design, const NocConfig& noc, const CostTable& table) {
  double mw = 0.0;
  for (const auto& item : design_inventory(design)) mw += table.at(item.component).leakage_mw * item.count;
  mw *= noc.nodes();
  if (noc.nodes() > 1) mw += noc.nodes() * table.at("noc_router").leakage_mw;
  return mw * 1e-3;
}

// Event-count energy accounting over a schedule; order-free. Leakage is
// charged for the full wall time, stalls included.
inline double energy_of(const ScheduleResult& sched, const Design& design, const NocConfig& noc,
                        const CostTable& table) {
  const bool is_array = std::holds_alternative<ArrayConfig>(design.cfg);
  const auto* base = std::get_if<BaselineConfig>(&design.cfg);
  std::string mac_component = "mac_pe";
  if (base && (base->kind == BaselineKind::SystolicFigna || base->kind == BaselineKind::SimdFigna))
    mac_component = "figna_pe";
  if (base && base->kind == BaselineKind::TensorCore) mac_component = "tensor_mac";

  int64_t isram = 64 * 1024, wsram = 64 * 1024, osram = 64 * 1024;
  if (is_array) {
    const auto& a = std::get<ArrayConfig>(design.cfg);
    isram = a.isram_bytes;
    wsram = a.wsram_bytes;
    osram = a.osram_bytes;
  } else {
    isram = base->isram_bytes;
    wsram = base->wsram_bytes;
    osram = base->osram_bytes;
  }

  double pj = 0.0;
  for (const auto& s : sched.ops) {
    const auto& e = s.events;
    const double r = static_cast<double>(s.op.repeat);
    pj += r * e.subscriptions * table.at("pe").energy_pj;
    pj += r * e.tc_conversions * table.at("tc").energy_pj;
    pj += r * e.accumulator_ops * table.at("acc").energy_pj;
    pj += r * e.mac_ops * table.at(mac_component).energy_pj;
    pj += r * e.vector_macs * table.at("vector_mac").energy_pj;
    pj += r * e.isram_bits * table.at(sram_class(isram)).energy_pj;
    pj += r * e.wsram_bits * table.at(sram_class(wsram)).energy_pj;
    pj += r * e.osram_bits * table.at(sram_class(osram)).energy_pj;
    pj += r * e.dram_bytes * table.at("dram_byte").energy_pj;
    pj += r * e.noc_byte_hops * table.at("noc_hop_byte").energy_pj;
  }
  return pj * 1e-12 + leakage_w_of(design, noc, table) * sched.wall_seconds();
}

// Default component costs. Placeholder magnitudes with 45nm-flavored
// relative scale, NOT synthesis results; any comparison built on them is
// only meaningful as a ratio or an ordering. Override via the config file
// for calibrated studies.
inline CostTable default_cost_table() {
  CostTable t;
  t.components = {
      {"tc", {1.2e-4, 0.08, 2e-3}},
      {"pe", {6.0e-5, 0.02, 1e-3}},
      {"or_tree", {1.8e-4, 0.05, 2e-3}},
      {"pp", {1.5e-4, 0.04, 2e-3}},
      {"mproc", {1.0e-4, 0.03, 1e-3}},
      {"eproc", {2.0e-3, 0.50, 2e-2}},
      {"sw", {3.0e-3, 0.30, 3e-2}},
      {"fifo_bit", {2.5e-6, 0.01, 5e-5}},
      {"sram_64k_bit", {1.0e-6, 0.006, 1.2e-5}},
      {"sram_1m_bit", {8.0e-7, 0.012, 1.0e-5}},
      {"acc", {3.0e-4, 0.40, 1e-2}},
      {"vector_mac", {9.0e-4, 1.20, 3e-2}},
      {"mac_pe", {1.2e-3, 1.00, 3.5e-2}},
      {"figna_pe", {1.38e-3, 0.90, 4e-2}},
      {"tensor_mac", {7.0e-4, 0.80, 2e-2}},
      {"adder", {1.5e-4, 0.15, 4e-3}},
      {"control", {1.0e-2, 0.00, 1e-1}},
      {"noc_router", {5.0e-2, 0.00, 1.0}},
      {"noc_hop_byte", {0.0, 1.00, 0.0}},
      {"dram_byte", {0.0, 60.0, 0.0}},
  };
  return t;
}

// End-to-end roll-up for one (design, run) point.
struct CostReport {
  double area_mm2 = 0.0;       // array level, one node
  double chip_area_mm2 = 0.0;  // all nodes plus routers
  double energy_j = 0.0;
  double avg_power_w = 0.0;
  double throughput_tokens_s = 0.0;
  double energy_per_token_uj = 0.0;
  double energy_eff = 0.0;  // tokens/s per uJ/token
  double power_eff = 0.0;   // tokens/s per W
  double operational_carbon_g = 0.0;
  double embodied_carbon_g = 0.0;
};

inline CostReport cost_report(const ScheduleResult& sched, const Design& design,
                              const NocConfig& noc, const CostTable& table,
                              const CarbonParams& carbon, const OpGraph& graph) {
  CostReport r;
  r.area_mm2 = area_of(design, table).total_mm2;
  r.chip_area_mm2 = chip_area_of(design, noc, table);
  r.energy_j = energy_of(sched, design, noc, table);
  const double wall = sched.wall_seconds();
  r.avg_power_w = wall > 0 ? r.energy_j / wall : 0.0;
  if (graph.phase == Phase::Decode) {
    r.throughput_tokens_s = tokens_per_second(graph, static_cast<double>(sched.total_cycles),
                                              sched.frequency_hz);
    r.energy_per_token_uj = r.energy_j * 1e6 / graph.batch;
    r.energy_eff = r.energy_per_token_uj > 0 ? r.throughput_tokens_s / r.energy_per_token_uj : 0.0;
    r.power_eff = r.avg_power_w > 0 ? r.throughput_tokens_s / r.avg_power_w : 0.0;
  }
  const CarbonReport c = carbon_of(r.energy_j, r.chip_area_mm2, carbon);
  r.operational_carbon_g = c.operational_g;
  r.embodied_carbon_g = c.embodied_g;
  return r;
}

}  // namespace mugi
