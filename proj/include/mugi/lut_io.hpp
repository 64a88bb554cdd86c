#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mugi/lut.hpp"

namespace mugi {

// Flat binary LUT artifact: fixed header followed by row-major 16-bit
// entries, little-endian. Round-trips bit-exactly.
//
//   magic   "MGLT"
//   u32     version (1)
//   u32     kind
//   i32     min_exp
//   i32     max_exp
//   u8      signed flag
//   u32     row count
//   u32     row width
//   u16[]   entries

namespace detail {

inline void put_u32(std::ostream& os, uint32_t v) {
  char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF), char((v >> 24) & 0xFF)};
  os.write(b, 4);
}

inline uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) | (uint32_t(b[3]) << 24);
}

}  // namespace detail

inline void dump_lut(const Lut& lut, std::ostream& os) {
  os.write("MGLT", 4);
  detail::put_u32(os, 1);
  detail::put_u32(os, static_cast<uint32_t>(lut.kind()));
  detail::put_u32(os, static_cast<uint32_t>(lut.window().min_exp));
  detail::put_u32(os, static_cast<uint32_t>(lut.window().max_exp));
  os.put(lut.window().signed_inputs ? 1 : 0);
  detail::put_u32(os, static_cast<uint32_t>(lut.row_count()));
  detail::put_u32(os, static_cast<uint32_t>(lut.window().width()));
  for (const auto& row : lut.rows())
    for (Bf16 e : row) {
      const char b[2] = {char(e.bits & 0xFF), char((e.bits >> 8) & 0xFF)};
      os.write(b, 2);
    }
}

inline void dump_lut(const Lut& lut, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open LUT file for writing: " + path);
  dump_lut(lut, os);
  if (!os) throw std::runtime_error("LUT write failed: " + path);
}

inline Lut load_lut(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "MGLT") throw std::runtime_error("bad LUT magic");
  if (detail::get_u32(is) != 1) throw std::runtime_error("unsupported LUT version");
  const auto kind = static_cast<NonlinearKind>(detail::get_u32(is));
  LutWindow w;
  w.min_exp = static_cast<int32_t>(detail::get_u32(is));
  w.max_exp = static_cast<int32_t>(detail::get_u32(is));
  w.signed_inputs = is.get() != 0;
  const uint32_t row_count = detail::get_u32(is);
  const uint32_t width = detail::get_u32(is);
  if (width != static_cast<uint32_t>(w.width())) throw std::runtime_error("LUT width mismatch");
  if (row_count != (w.signed_inputs ? 16u : 8u)) throw std::runtime_error("LUT row count mismatch");
  std::vector<std::vector<Bf16>> rows(row_count);
  for (auto& row : rows) {
    row.resize(width);
    for (auto& e : row) {
      unsigned char b[2];
      is.read(reinterpret_cast<char*>(b), 2);
      e.bits = static_cast<uint16_t>(b[0] | (b[1] << 8));
    }
  }
  if (!is) throw std::runtime_error("truncated LUT file");
  return Lut(kind, w, std::move(rows));
}

inline Lut load_lut(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open LUT file: " + path);
  return load_lut(is);
}

}  // namespace mugi
