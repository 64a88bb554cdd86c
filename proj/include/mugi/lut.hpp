#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mugi/bf16.hpp"
#include "mugi/nonlinear.hpp"

namespace mugi {

// Contiguous exponent range covered by a LUT. A signed table stores rows
// for both input signs.
struct LutWindow {
  int min_exp = 0;
  int max_exp = 0;
  bool signed_inputs = false;

  int width() const { return max_exp - min_exp + 1; }
};

// Value-centric table: one row per (sign, rounded mantissa), one column per
// exponent in the window, exponent-ascending. Entries are the reference
// function evaluated in double precision at the reconstructed input, then
// rounded to BF16.
class Lut {
 public:
  Lut(NonlinearKind kind, LutWindow window, std::vector<std::vector<Bf16>> rows)
      : kind_(kind), window_(window), rows_(std::move(rows)) {}

  NonlinearKind kind() const { return kind_; }
  const LutWindow& window() const { return window_; }
  int row_count() const { return static_cast<int>(rows_.size()); }
  int covered_sign() const { return window_.signed_inputs ? -1 : single_sign_of(kind_); }

  const std::vector<Bf16>& row(int sign, int mantissa_index) const {
    return rows_[row_index(sign, mantissa_index)];
  }

  // Entry addressed by unbiased exponent.
  Bf16 entry(int sign, int mantissa_index, int exponent) const {
    if (exponent < window_.min_exp || exponent > window_.max_exp)
      throw std::out_of_range("exponent outside LUT window");
    return row(sign, mantissa_index)[exponent - window_.min_exp];
  }

  const std::vector<std::vector<Bf16>>& rows() const { return rows_; }

 private:
  int row_index(int sign, int mantissa_index) const {
    if (mantissa_index < 0 || mantissa_index > 7) throw std::out_of_range("mantissa index");
    if (window_.signed_inputs) return sign * 8 + mantissa_index;
    if (sign != single_sign_of(kind_))
      throw std::out_of_range("sign not covered by single-sign LUT");
    return mantissa_index;
  }

  NonlinearKind kind_;
  LutWindow window_;
  std::vector<std::vector<Bf16>> rows_;
};

inline Lut build_lut(NonlinearKind kind, LutWindow window) {
  if (window.width() < 1) throw std::invalid_argument("LUT window width must be >= 1");
  const int signs = window.signed_inputs ? 2 : 1;
  std::vector<std::vector<Bf16>> rows;
  rows.reserve(static_cast<size_t>(signs) * 8);
  for (int si = 0; si < signs; ++si) {
    const int sign = window.signed_inputs ? si : single_sign_of(kind);
    for (int m = 0; m < 8; ++m) {
      std::vector<Bf16> row;
      row.reserve(window.width());
      for (int e = window.min_exp; e <= window.max_exp; ++e) {
        SplitInput s;
        s.sign = static_cast<uint8_t>(sign);
        s.mantissa_index = static_cast<uint8_t>(m);
        s.exponent = e;
        row.push_back(bf16_from_double(reference_eval(kind, reconstruct(s))));
      }
      rows.push_back(std::move(row));
    }
  }
  return Lut(kind, window, std::move(rows));
}

// The 8-exponent sub-range selected for one mapping, with its entries
// materialized (the SW block output consumed by the array).
struct SlidingWindow {
  int base_exp = 0;
  bool signed_inputs = false;
  int single_sign = 0;
  std::vector<std::array<Bf16, kArrayWidth>> rows;  // same row order as the Lut

  Bf16 lookup(int sign, int mantissa_index, int column) const {
    const int idx = signed_inputs ? sign * 8 + mantissa_index : mantissa_index;
    if (!signed_inputs && sign != single_sign)
      throw std::out_of_range("sign not covered by single-sign window");
    return rows[idx][column];
  }
};

enum class WindowPolicy { AlignMax, AlignMin };

// Slide an 8-wide window over the LUT to cover the observed exponent range,
// clamped to the LUT boundary. AlignMax keeps the largest observed exponent
// in the window; AlignMin the smallest.
inline SlidingWindow select_window(const Lut& lut, ExponentStats stats, WindowPolicy policy) {
  const LutWindow& w = lut.window();
  if (w.width() < kArrayWidth)
    throw std::invalid_argument("LUT window narrower than the array width");
  int base = policy == WindowPolicy::AlignMax ? stats.max_exp - (kArrayWidth - 1) : stats.min_exp;
  base = std::max(w.min_exp, std::min(base, w.max_exp - (kArrayWidth - 1)));
  SlidingWindow sw;
  sw.base_exp = base;
  sw.signed_inputs = w.signed_inputs;
  sw.single_sign = lut.covered_sign() < 0 ? 0 : lut.covered_sign();
  sw.rows.resize(lut.rows().size());
  const int offset = base - w.min_exp;
  for (size_t r = 0; r < lut.rows().size(); ++r)
    for (int c = 0; c < kArrayWidth; ++c) sw.rows[r][c] = lut.rows()[r][offset + c];
  return sw;
}

// Lowest-exponent window, used when a mapping has no finite inputs.
inline SlidingWindow default_window(const Lut& lut) {
  return select_window(lut, ExponentStats{lut.window().min_exp, lut.window().min_exp},
                       WindowPolicy::AlignMin);
}

enum class ClampKind { InWindow, Underflow, Overflow };

struct ClampResult {
  ClampKind kind = ClampKind::InWindow;
  int column = 0;  // resolved column, clamped to [0, 7] on under/overflow
};

// Exponent clamp against the sliding window. The resolved column is what the
// datapath actually subscribes to on the clamp paths.
inline ClampResult clamp_exponent(const SplitInput& x, const SlidingWindow& sw) {
  if (x.special != Special::None)
    throw std::invalid_argument("clamp_exponent on special input");
  const int col = x.exponent - sw.base_exp;
  if (col < 0) return {ClampKind::Underflow, 0};
  if (col >= kArrayWidth) return {ClampKind::Overflow, kArrayWidth - 1};
  return {ClampKind::InWindow, col};
}

}  // namespace mugi
