#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

namespace mugi {

// Array width everywhere: 8 columns, matching the 2^3-cycle temporal window
// of the 3-bit rounded mantissa.
inline constexpr int kArrayWidth = 8;

// BF16 value held as its 16-bit pattern: 1 sign, 8 exponent (bias 127),
// 7 mantissa bits. All 2^16 patterns are valid.
struct Bf16 {
  uint16_t bits = 0;

  friend bool operator==(Bf16 a, Bf16 b) { return a.bits == b.bits; }

  int sign() const { return (bits >> 15) & 1; }
  int exponent_field() const { return (bits >> 7) & 0xFF; }
  int mantissa_field() const { return bits & 0x7F; }
  int exponent_unbiased() const { return exponent_field() - 127; }
};

enum class Bf16Class { Zero, Subnormal, Normal, Inf, NaN };

inline Bf16Class classify(Bf16 x) {
  const int e = x.exponent_field();
  const int m = x.mantissa_field();
  if (e == 0) return m == 0 ? Bf16Class::Zero : Bf16Class::Subnormal;
  if (e == 0xFF) return m == 0 ? Bf16Class::Inf : Bf16Class::NaN;
  return Bf16Class::Normal;
}

inline Bf16 bf16_from_bits(uint16_t bits) { return Bf16{bits}; }

inline float to_float(Bf16 x) {
  return std::bit_cast<float>(static_cast<uint32_t>(x.bits) << 16);
}

inline Bf16 bf16_zero(int sign = 0) { return Bf16{static_cast<uint16_t>(sign << 15)}; }
inline Bf16 bf16_one() { return Bf16{0x3F80}; }
inline Bf16 bf16_inf(int sign = 0) { return Bf16{static_cast<uint16_t>((sign << 15) | 0x7F80)}; }
inline Bf16 bf16_nan() { return Bf16{0x7FC0}; }

// Round-to-nearest-even narrowing from float.
inline Bf16 bf16_from_float(float v) {
  uint32_t u = std::bit_cast<uint32_t>(v);
  if (std::isnan(v)) return Bf16{static_cast<uint16_t>((u >> 16) | 0x0040)};
  u += 0x7FFF + ((u >> 16) & 1);
  return Bf16{static_cast<uint16_t>(u >> 16)};
}

// Round-to-nearest-even narrowing from double, in a single rounding step.
// Going through float first would double-round.
inline Bf16 bf16_from_double(double v) {
  if (std::isnan(v)) return bf16_nan();
  const int sign = std::signbit(v) ? 1 : 0;
  if (std::isinf(v)) return bf16_inf(sign);
  if (v == 0.0) return bf16_zero(sign);
  const double a = std::fabs(v);
  int e = std::ilogb(a);
  if (e < -126) {
    // Subnormal target range: unit is 2^-133. Scaling by a power of two is
    // exact, so llrint sees the exact value and applies ties-to-even.
    const long long q = std::llrint(std::scalbn(a, 133));
    if (q == 0) return bf16_zero(sign);
    if (q >= 128) return Bf16{static_cast<uint16_t>((sign << 15) | 0x0080)};
    return Bf16{static_cast<uint16_t>((sign << 15) | q)};
  }
  long long m = std::llrint(std::scalbn(a, 7 - e));  // mantissa * 128, in [128, 256]
  if (m == 256) {
    m = 128;
    ++e;
  }
  if (e > 127) return bf16_inf(sign);
  return Bf16{static_cast<uint16_t>((sign << 15) | ((e + 127) << 7) | (m - 128))};
}

// Signed 4-bit weight value in [-8, 7].
struct Int4 {
  int8_t value = 0;

  explicit Int4(int v = 0) : value(static_cast<int8_t>(v)) {
    if (v < -8 || v > 7) throw std::out_of_range("Int4 value out of [-8, 7]");
  }

  // Magnitude clamps -8 to 7: the 3-bit temporal window cannot express 8,
  // and quantizers are configured to the symmetric range [-7, 7].
  int sign() const { return value < 0 ? 1 : 0; }
  int magnitude() const {
    const int m = value < 0 ? -static_cast<int>(value) : value;
    return m > 7 ? 7 : m;
  }
};

enum class Special : uint8_t { None, Zero, Inf, NaN };

// Split BF16 input after mantissa rounding: sign, 3-bit rounded mantissa
// index (implicit leading 1 not stored), unbiased exponent.
struct SplitInput {
  uint8_t sign = 0;
  uint8_t mantissa_index = 0;  // [0, 7]
  int exponent = 0;            // unbiased; carry-out from rounding applied
  Special special = Special::None;
};

// Rounds the 7-bit mantissa to 3 bits, nearest-even. A carry out of the
// 3-bit field wraps the index to 0 and increments the exponent. BF16
// subnormals flush to the Zero special path.
inline SplitInput split_and_round(Bf16 x) {
  SplitInput s;
  s.sign = static_cast<uint8_t>(x.sign());
  switch (classify(x)) {
    case Bf16Class::Zero:
    case Bf16Class::Subnormal:
      s.special = Special::Zero;
      return s;
    case Bf16Class::Inf:
      s.special = Special::Inf;
      return s;
    case Bf16Class::NaN:
      s.special = Special::NaN;
      return s;
    case Bf16Class::Normal:
      break;
  }
  const int m = x.mantissa_field();
  int q = m >> 4;
  const int r = m & 0xF;
  if (r > 8 || (r == 8 && (q & 1))) ++q;
  int e = x.exponent_unbiased();
  if (q == 8) {
    q = 0;
    ++e;
  }
  s.mantissa_index = static_cast<uint8_t>(q);
  s.exponent = e;
  return s;
}

// Value represented by a non-special SplitInput: (-1)^s * (1 + m/8) * 2^e.
inline double reconstruct(const SplitInput& s) {
  const double v = std::ldexp(1.0 + s.mantissa_index / 8.0, s.exponent);
  return s.sign ? -v : v;
}

struct ExponentStats {
  int min_exp = 0;
  int max_exp = 0;
};

// Extrema of unbiased exponents over non-special inputs; empty when every
// input took a special path.
inline std::optional<ExponentStats> exponent_stats(std::span<const SplitInput> xs) {
  std::optional<ExponentStats> out;
  for (const auto& s : xs) {
    if (s.special != Special::None) continue;
    if (!out) {
      out = ExponentStats{s.exponent, s.exponent};
    } else {
      out->min_exp = std::min(out->min_exp, s.exponent);
      out->max_exp = std::max(out->max_exp, s.exponent);
    }
  }
  return out;
}

}  // namespace mugi
