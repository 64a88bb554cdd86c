#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mugi/bf16.hpp"
#include "oracle.hpp"

using namespace mugi;

TEST_CASE("bf16 field decomposition") {
  CHECK(Bf16{0x3F80}.sign() == 0);
  CHECK(Bf16{0x3F80}.exponent_field() == 127);
  CHECK(Bf16{0x3F80}.mantissa_field() == 0);
  CHECK(to_float(Bf16{0x3F80}) == 1.0f);

  CHECK(classify(Bf16{0x0000}) == Bf16Class::Zero);
  CHECK(classify(Bf16{0x8000}) == Bf16Class::Zero);

  const Bf16 x{0xC0C0};
  CHECK(x.sign() == 1);
  CHECK(x.exponent_unbiased() == 2);
  CHECK(x.mantissa_field() == 0b1000000);
  CHECK(to_float(x) == -6.0f);
}

TEST_CASE("bf16 classification is exhaustive and mutually exclusive") {
  int counts[5] = {};
  for (uint32_t b = 0; b < 0x10000; ++b) counts[static_cast<int>(classify(Bf16{static_cast<uint16_t>(b)}))]++;
  CHECK(counts[0] == 2);        // +-0
  CHECK(counts[1] == 2 * 127);  // subnormals
  CHECK(counts[3] == 2);        // +-inf
  CHECK(counts[4] == 2 * 127);  // NaNs
  CHECK(counts[0] + counts[1] + counts[2] + counts[3] + counts[4] == 0x10000);
}

TEST_CASE("bf16 round-trips through float for every pattern") {
  for (uint32_t b = 0; b < 0x10000; ++b) {
    const Bf16 x{static_cast<uint16_t>(b)};
    if (classify(x) == Bf16Class::NaN) {
      CHECK(classify(bf16_from_float(to_float(x))) == Bf16Class::NaN);
    } else {
      CHECK(bf16_from_float(to_float(x)).bits == x.bits);
    }
  }
}

TEST_CASE("bf16_from_double matches the bit-level reference") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-100.0, 100.0);
  for (int i = 0; i < 20000; ++i) {
    const double v = uni(rng);
    CHECK(bf16_from_double(v).bits == oracle::bf16_bits_from_double(v));
  }
  // Exact BF16 midpoints exercise the tie path; the float detour would
  // double-round some of these.
  for (uint32_t b = 0x0001; b < 0x7F7F; ++b) {
    const double lo = to_float(Bf16{static_cast<uint16_t>(b)});
    const double hi = to_float(Bf16{static_cast<uint16_t>(b + 1)});
    const double mid = 0.5 * (lo + hi);
    CHECK(bf16_from_double(mid).bits == oracle::bf16_bits_from_double(mid));
  }
}

TEST_CASE("bf16_from_double agrees with nearest-search on a sample") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-1000.0, 1000.0);
  for (int i = 0; i < 200; ++i) {
    const double v = uni(rng);
    CHECK(bf16_from_double(v).bits == oracle::nearest_bf16_bits(v));
  }
}

TEST_CASE("split_and_round matches scalar round-half-even over all mantissas") {
  for (int m = 0; m < 128; ++m) {
    const Bf16 x{static_cast<uint16_t>((120 << 7) | m)};  // exponent -7
    const SplitInput s = split_and_round(x);
    // Independent scalar reference: m/16 rounded half-to-even.
    const double exact = m / 16.0;
    const auto ref = static_cast<int>(std::llrint(exact));
    if (ref == 8) {
      CHECK(s.mantissa_index == 0);
      CHECK(s.exponent == -6);
    } else {
      CHECK(s.mantissa_index == ref);
      CHECK(s.exponent == -7);
    }
  }
}

TEST_CASE("split_and_round named cases") {
  SECTION("exact representable") {
    const Bf16 x{static_cast<uint16_t>((130 << 7) | 0)};
    const SplitInput s = split_and_round(x);
    CHECK(s.mantissa_index == 0);
    CHECK(s.exponent == 3);
  }
  SECTION("remainder above half rounds up") {
    const Bf16 x{static_cast<uint16_t>((127 << 7) | 0b0111011)};
    CHECK(split_and_round(x).mantissa_index == 0b100);
  }
  SECTION("carry out wraps and bumps the exponent") {
    const Bf16 x{static_cast<uint16_t>((127 << 7) | 0b1111111)};
    const SplitInput s = split_and_round(x);
    CHECK(s.mantissa_index == 0);
    CHECK(s.exponent == 1);
  }
  SECTION("specials pass through") {
    CHECK(split_and_round(Bf16{0x0000}).special == Special::Zero);
    CHECK(split_and_round(Bf16{0x0001}).special == Special::Zero);  // subnormal flush
    CHECK(split_and_round(Bf16{0xFF80}).special == Special::Inf);
    CHECK(split_and_round(Bf16{0x7FC1}).special == Special::NaN);
    CHECK(split_and_round(Bf16{0x8001}).sign == 1);
  }
}

TEST_CASE("split_and_round relative error is at most 2^-4 for normals") {
  for (uint32_t b = 0; b < 0x10000; ++b) {
    const Bf16 x{static_cast<uint16_t>(b)};
    if (classify(x) != Bf16Class::Normal) continue;
    const SplitInput s = split_and_round(x);
    const double orig = to_float(x);
    const double rel = std::fabs((reconstruct(s) - orig) / orig);
    CHECK(rel <= 0.0625);
  }
}

TEST_CASE("split_and_round is monotone in magnitude over same-sign normals") {
  double prev = 0.0;
  for (uint32_t b = 0x0080; b < 0x7F80; ++b) {  // positive normals ascending
    const SplitInput s = split_and_round(Bf16{static_cast<uint16_t>(b)});
    const double r = reconstruct(s);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("exponent_stats") {
  auto make = [](int e) {
    SplitInput s;
    s.exponent = e;
    return s;
  };
  SECTION("extrema") {
    const SplitInput xs[] = {make(2), make(-1), make(4)};
    const auto st = exponent_stats(xs);
    REQUIRE(st);
    CHECK(st->min_exp == -1);
    CHECK(st->max_exp == 4);
  }
  SECTION("single element") {
    const SplitInput xs[] = {make(0)};
    const auto st = exponent_stats(xs);
    REQUIRE(st);
    CHECK(st->min_exp == 0);
    CHECK(st->max_exp == 0);
  }
  SECTION("specials excluded") {
    SplitInput z;
    z.special = Special::Zero;
    const SplitInput xs[] = {z, make(3)};
    const auto st = exponent_stats(xs);
    REQUIRE(st);
    CHECK(st->min_exp == 3);
    CHECK(st->max_exp == 3);
  }
  SECTION("all special yields empty") {
    SplitInput z;
    z.special = Special::NaN;
    const SplitInput xs[] = {z};
    CHECK(!exponent_stats(xs));
  }
}

TEST_CASE("int4 range and magnitude clamp") {
  CHECK_THROWS_AS(Int4(8), std::out_of_range);
  CHECK_THROWS_AS(Int4(-9), std::out_of_range);
  CHECK(Int4(-8).sign() == 1);
  CHECK(Int4(-8).magnitude() == 7);
  CHECK(Int4(-7).magnitude() == 7);
  CHECK(Int4(7).magnitude() == 7);
  CHECK(Int4(0).magnitude() == 0);
  CHECK(Int4(0).sign() == 0);
}
