#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>

#include "mugi/perf.hpp"

namespace mugi {

// Cycle-stepped models of the same datapaths the closed forms describe.
// These step tile/window/block state explicitly and are used to cross-check
// the analytical cycle counts; they share no arithmetic with them beyond
// the configuration.

// Mugi array running one nonlinear op: mappings of H x 8 elements enter on
// an 8-cycle initiation interval; after the last window the pipeline drains
// through the two subscriptions, the column stagger, and the register
// stages. Softmax then runs the max-subtract pass, the normalization pass,
// and the sum store on the vector unit.
inline int64_t sim_mugi_nonlinear(const ArrayConfig& cfg, int64_t elements, bool softmax) {
  if (elements < 1) throw std::invalid_argument("nonlinear element count");
  const int64_t slots = static_cast<int64_t>(cfg.height) * kArrayWidth;
  int64_t cycle = 0;
  int64_t remaining = elements;
  int window_pos = 0;
  while (remaining > 0) {
    ++cycle;
    ++window_pos;
    if (window_pos == 8) {  // one mapping retired
      window_pos = 0;
      remaining -= std::min(remaining, slots);
    }
  }
  cycle += 8;  // exponent subscription window
  cycle += 8;  // mantissa subscription drain of the last mapping
  cycle += kArrayWidth - 1;  // column stagger
  cycle += cfg.pipeline_depth;
  if (softmax) {
    for (int64_t done = 0; done < elements; done += cfg.vector_lanes) ++cycle;  // subtract max
    for (int64_t done = 0; done < elements; done += cfg.vector_lanes) ++cycle;  // normalize
    ++cycle;  // sum store
  }
  return cycle;
}

// Mugi array running one GEMM op: output-stationary tiles, one 8-cycle
// temporal window per K index, with the dequantization vector engine
// consuming drained outputs concurrently.
inline int64_t sim_mugi_gemm(const ArrayConfig& cfg, int64_t m, int64_t n, int64_t k,
                             int quant_group) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  const int64_t tiles = ceil_div(m, cfg.height) * ceil_div(n, kArrayWidth);
  const int64_t groups = quant_group > 0 ? ceil_div(k, quant_group) : 0;
  const int64_t tile_outputs = static_cast<int64_t>(cfg.height) * kArrayWidth;

  int64_t cycle = 0;
  int64_t tile = 0;
  int64_t k_idx = 0;
  int window_pos = 0;
  bool streaming = tiles > 0;
  // Per-tile dequant work in vector-lane rounds.
  std::deque<int64_t> vec_queue;
  for (int64_t t = 0; t < tiles && groups > 0; ++t)
    vec_queue.push_back(ceil_div(tile_outputs * groups, cfg.vector_lanes));

  while (streaming || !vec_queue.empty()) {
    ++cycle;
    if (streaming) {
      ++window_pos;
      if (window_pos == 8) {
        window_pos = 0;
        ++k_idx;
        if (k_idx == k) {
          k_idx = 0;
          ++tile;
          if (tile == tiles) streaming = false;
        }
      }
    }
    if (!vec_queue.empty()) {
      if (--vec_queue.front() == 0) vec_queue.pop_front();
    }
  }
  return cycle + (kArrayWidth - 1) + cfg.pipeline_depth;
}

// Weight-stationary array: the load port fetches one block in H cycles,
// double buffered against the N-cycle input stream; fill and drain cost one
// traversal each.
inline int64_t sim_systolic_gemm(const BaselineConfig& cfg, int64_t m, int64_t n, int64_t k) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  const int64_t h = cfg.height;
  const int64_t blocks = ceil_div(k, h) * ceil_div(m, h);
  int64_t load_end = 0;
  int64_t stream_end = 0;
  for (int64_t b = 0; b < blocks; ++b) {
    load_end += h;  // load port busy back to back
    stream_end = std::max(load_end, stream_end) + n;
  }
  return stream_end + h;  // drain
}

inline int64_t sim_tensor_gemm(const BaselineConfig& cfg, int64_t m, int64_t n, int64_t k) {
  if (m < 1 || n < 1 || k < 1) throw std::invalid_argument("gemm dims");
  int64_t cycle = 0;
  for (int64_t bm = 0; bm < m; bm += 8)
    for (int64_t bn = 0; bn < n; bn += 16)
      for (int64_t bk = 0; bk < k; bk += 16) ++cycle;
  return cycle + cfg.pipeline_depth;
}

inline int64_t sim_vector_nonlinear(const VectorUnitConfig& cfg, int64_t elements, bool softmax) {
  if (elements < 1) throw std::invalid_argument("nonlinear element count");
  int64_t cycle = 0;
  int64_t rounds = 0;
  for (int64_t done = 0; done < elements; done += cfg.lanes) ++rounds;
  if (cfg.kind == VectorUnitConfig::Kind::Precise) {
    cycle = rounds * cfg.precise_cycles;  // blocking MAC sequence
  } else {
    cycle = cfg.stages() + rounds - 1;  // pipelined issue
  }
  if (softmax) cycle += 2 * rounds + 1;
  return cycle;
}

}  // namespace mugi
