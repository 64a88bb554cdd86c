#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mugi/bf16.hpp"
#include "mugi/temporal.hpp"

namespace mugi {

// Grouped INT4 matrix (weights or quantized KV cache): per-row scale groups
// along the K dimension, one BF16 scale per group.
struct Int4Matrix {
  int rows = 0;
  int cols = 0;
  int group_size = 0;
  std::vector<Int4> values;  // row-major, rows x cols
  std::vector<Bf16> scales;  // row-major, rows x (cols / group_size)

  Int4Matrix(int r, int c, int group) : rows(r), cols(c), group_size(group) {
    if (r < 1 || c < 1) throw std::invalid_argument("Int4Matrix dims");
    if (group < 1 || c % group != 0)
      throw std::invalid_argument("quantization group size must divide K");
    values.resize(static_cast<size_t>(r) * c, Int4(0));
    scales.resize(static_cast<size_t>(r) * (c / group), bf16_one());
  }

  Int4& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
  const Int4& at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
  Bf16& scale_at(int r, int g) { return scales[static_cast<size_t>(r) * (cols / group_size) + g]; }
  Bf16 scale_at(int r, int g) const {
    return scales[static_cast<size_t>(r) * (cols / group_size) + g];
  }
};

struct Bf16Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Bf16> values;

  Bf16Matrix(int r, int c) : rows(r), cols(c), values(static_cast<size_t>(r) * c) {
    if (r < 1 || c < 1) throw std::invalid_argument("Bf16Matrix dims");
  }

  Bf16& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
  const Bf16& at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

// Asymmetric INT4 x BF16 GEMM with per-group dequantization after the
// integer-weighted accumulation, matching the array's order of operations:
//
//   for each group g (ascending): partial = sum_k sign_k * (|w_k| * b_k)
//   acc += scale(g) * partial
//
// Per-element products use temporal-multiply semantics (magnitude
// accumulation, sign applied after). All accumulation is FP32; the final
// result rounds to BF16. Tiling by array height changes nothing here, since
// every output accumulates over the full K range in ascending order.
inline Bf16Matrix gemm(const Int4Matrix& w, const Bf16Matrix& x, int array_h) {
  if (array_h < 1) throw std::invalid_argument("array height");
  if (w.cols != x.rows) throw std::invalid_argument("gemm dimension mismatch");
  const int m_dim = w.rows, n_dim = x.cols, k_dim = w.cols;
  Bf16Matrix out(m_dim, n_dim);
  const int groups = k_dim / w.group_size;
  for (int m0 = 0; m0 < m_dim; m0 += array_h) {
    const int m1 = std::min(m0 + array_h, m_dim);
    for (int n0 = 0; n0 < n_dim; n0 += kArrayWidth) {
      const int n1 = std::min(n0 + kArrayWidth, n_dim);
      for (int m = m0; m < m1; ++m) {
        for (int n = n0; n < n1; ++n) {
          float acc = 0.0f;
          for (int g = 0; g < groups; ++g) {
            float partial = 0.0f;
            for (int k = g * w.group_size; k < (g + 1) * w.group_size; ++k) {
              const Int4& a = w.at(m, k);
              const float prod = temporal_multiply(a.magnitude(), x.at(k, n));
              partial += a.sign() ? -prod : prod;
            }
            acc += to_float(w.scale_at(m, g)) * partial;
          }
          out.at(m, n) = bf16_from_float(acc);
        }
      }
    }
  }
  return out;
}

}  // namespace mugi
