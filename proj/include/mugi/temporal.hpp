#pragma once

#include <stdexcept>

#include "mugi/bf16.hpp"

namespace mugi {

// One spike per conversion window; the spike cycle is the encoded magnitude.
struct TemporalSignal {
  int spike_cycle = 0;
};

inline TemporalSignal temporal_encode(int magnitude, int bits) {
  if (bits < 1 || bits > 16) throw std::out_of_range("temporal code width");
  if (magnitude < 0 || magnitude >= (1 << bits))
    throw std::out_of_range("magnitude outside temporal window");
  return TemporalSignal{magnitude};
}

// i * w realized as i accumulations of w at FP32 width. Exact for the
// magnitudes the array uses: the product needs at most 8 + 4 significand
// bits, well inside float.
inline float temporal_multiply(int i, Bf16 w) {
  if (i < 0) throw std::out_of_range("negative temporal magnitude");
  const float addend = to_float(w);
  float acc = 0.0f;
  for (int c = 0; c < i; ++c) acc += addend;
  return acc;
}

}  // namespace mugi
