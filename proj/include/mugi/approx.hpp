#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "mugi/bf16.hpp"
#include "mugi/lut.hpp"
#include "mugi/nonlinear.hpp"

namespace mugi {

enum class ApproxPath { Lut, Special, Clamp };

// One array cell's result. For the Lut path the subscription cycle is the
// mantissa spike index plus the exponent column index; the two subscriptions
// run back to back, so the elapsed cycle count is subscription_cycle + 1.
struct ApproxResult {
  Bf16 value;
  int subscription_cycle = 0;
  ApproxPath path = ApproxPath::Lut;
};

inline int elapsed_cycles(const ApproxResult& r) { return r.subscription_cycle + 1; }

// Full per-element datapath: split/round, special mux, exponent clamp,
// row + column subscription.
//
// Clamp semantics per kind:
//   exp        under/overflow subscribe the boundary column (a LUT access)
//   activations underflow flushes to signed zero; overflow passes the
//               original input through on the positive side and vanishes
//               to signed zero on the negative side
inline ApproxResult approximate_one(Bf16 x, const SlidingWindow& sw, NonlinearKind kind) {
  const SplitInput s = split_and_round(x);
  if (s.special != Special::None)
    return {special_result(kind, s.special, x), 0, ApproxPath::Special};
  const ClampResult c = clamp_exponent(s, sw);
  const int cycle = s.mantissa_index + c.column;
  if (c.kind == ClampKind::InWindow)
    return {sw.lookup(s.sign, s.mantissa_index, c.column), cycle, ApproxPath::Lut};
  if (kind == NonlinearKind::Exp)
    return {sw.lookup(s.sign, s.mantissa_index, c.column), cycle, ApproxPath::Clamp};
  if (c.kind == ClampKind::Underflow) return {bf16_zero(s.sign), cycle, ApproxPath::Clamp};
  return {s.sign ? bf16_zero(1) : x, cycle, ApproxPath::Clamp};
}

// Grid form with an explicit window (one mapping's worth of inputs).
inline std::vector<ApproxResult> approximate_grid(std::span<const Bf16> grid,
                                                  const SlidingWindow& sw, NonlinearKind kind) {
  if (grid.size() % kArrayWidth != 0)
    throw std::invalid_argument("grid width must be exactly 8");
  std::vector<ApproxResult> out;
  out.reserve(grid.size());
  for (Bf16 x : grid) out.push_back(approximate_one(x, sw, kind));
  return out;
}

// Grid form that chooses the sliding window from the grid's own exponent
// statistics, shared by every element of the mapping.
inline std::vector<ApproxResult> approximate(std::span<const Bf16> grid, const Lut& lut,
                                             WindowPolicy policy) {
  if (grid.empty() || grid.size() % kArrayWidth != 0)
    throw std::invalid_argument("grid width must be exactly 8");
  std::vector<SplitInput> split;
  split.reserve(grid.size());
  for (Bf16 x : grid) split.push_back(split_and_round(x));
  const auto stats = exponent_stats(split);
  const SlidingWindow sw = stats ? select_window(lut, *stats, policy) : default_window(lut);
  return approximate_grid(grid, sw, lut.kind());
}

}  // namespace mugi
