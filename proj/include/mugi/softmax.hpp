#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mugi/approx.hpp"
#include "mugi/lut.hpp"

namespace mugi {

// Softmax pipeline: subtract the max, approximate exp per element through
// the array, accumulate the exp results at FP32 width, then scale by the
// reciprocal of the sum in the vector unit. One sliding window (AlignMax)
// is shared by the whole vector; the result does not depend on the array
// geometry.
//
// -inf inputs are tolerated (they clamp to zero weight); +inf and NaN are
// contract violations.
inline std::vector<Bf16> softmax(std::span<const Bf16> xs, const Lut& lut) {
  if (xs.empty()) throw std::invalid_argument("softmax of empty vector");
  if (lut.kind() != NonlinearKind::Exp) throw std::invalid_argument("softmax needs an exp LUT");
  float max_v = -std::numeric_limits<float>::infinity();
  for (Bf16 x : xs) {
    const float f = to_float(x);
    if (std::isnan(f) || f == std::numeric_limits<float>::infinity())
      throw std::invalid_argument("softmax input must be finite or -inf");
    max_v = std::max(max_v, f);
  }
  if (std::isinf(max_v)) throw std::domain_error("degenerate softmax: all inputs -inf");

  std::vector<Bf16> shifted(xs.size());
  std::vector<SplitInput> split(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    shifted[i] = bf16_from_float(to_float(xs[i]) - max_v);
    split[i] = split_and_round(shifted[i]);
  }
  const auto stats = exponent_stats(split);
  const SlidingWindow sw = stats ? select_window(lut, *stats, WindowPolicy::AlignMax)
                                 : default_window(lut);

  std::vector<float> expd(xs.size());
  float sum = 0.0f;
  for (size_t i = 0; i < xs.size(); ++i) {
    expd[i] = to_float(approximate_one(shifted[i], sw, NonlinearKind::Exp).value);
    sum += expd[i];
  }
  const float recip = 1.0f / sum;
  std::vector<Bf16> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = bf16_from_float(expd[i] * recip);
  return out;
}

}  // namespace mugi
