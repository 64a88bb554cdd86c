#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mugi/gemm.hpp"
#include "oracle.hpp"

using namespace mugi;

namespace {

Int4Matrix random_weights(std::mt19937& rng, int m, int k, int group, int lo = -8) {
  Int4Matrix w(m, k, group);
  std::uniform_int_distribution<int> val(lo, 7);
  std::uniform_real_distribution<float> sc(0.001f, 0.3f);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < k; ++c) w.at(r, c) = Int4(val(rng));
    for (int g = 0; g < k / group; ++g) w.scale_at(r, g) = bf16_from_float(sc(rng));
  }
  return w;
}

Bf16Matrix random_inputs(std::mt19937& rng, int k, int n) {
  Bf16Matrix x(k, n);
  std::normal_distribution<float> val(0.0f, 2.0f);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < n; ++c) x.at(r, c) = bf16_from_float(val(rng));
  return x;
}

int random_divisor(std::mt19937& rng, int k) {
  std::vector<int> d;
  for (int g = 1; g <= k; ++g)
    if (k % g == 0) d.push_back(g);
  return d[std::uniform_int_distribution<size_t>(0, d.size() - 1)(rng)];
}

}  // namespace

TEST_CASE("gemm identity case") {
  Int4Matrix w(1, 1, 1);
  w.at(0, 0) = Int4(1);
  Bf16Matrix x(1, 1);
  x.at(0, 0) = bf16_one();
  CHECK(to_float(gemm(w, x, 8).at(0, 0)) == 1.0f);
}

TEST_CASE("gemm dot product example") {
  Int4Matrix w(1, 2, 2);
  w.at(0, 0) = Int4(3);
  w.at(0, 1) = Int4(-2);
  Bf16Matrix x(2, 1);
  x.at(0, 0) = bf16_from_float(1.5f);
  x.at(1, 0) = bf16_from_float(0.5f);
  CHECK(to_float(gemm(w, x, 8).at(0, 0)) == 3.5f);
}

TEST_CASE("gemm matches the brute-force reference on random instances") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Int4Matrix w = random_weights(rng, 4, 4, random_divisor(rng, 4));
    const Bf16Matrix x = random_inputs(rng, 4, 4);
    const Bf16Matrix got = gemm(w, x, 8);
    const Bf16Matrix want = oracle::reference_gemm(w, x);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) CHECK(got.at(m, n).bits == want.at(m, n).bits);
  }
}

TEST_CASE("gemm shape sweep against the reference") {
  std::mt19937 rng(32);
  const int dims[] = {1, 2, 3, 8, 9, 16};
  for (int m : dims)
    for (int n : dims)
      for (int k : dims) {
        const Int4Matrix w = random_weights(rng, m, k, random_divisor(rng, k));
        const Bf16Matrix x = random_inputs(rng, k, n);
        const Bf16Matrix got = gemm(w, x, 8);
        const Bf16Matrix want = oracle::reference_gemm(w, x);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) REQUIRE(got.at(i, j).bits == want.at(i, j).bits);
      }
}

TEST_CASE("gemm is sign-symmetric") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Int4Matrix w = random_weights(rng, 5, 8, 4, /*lo=*/-7);
    Int4Matrix neg = w;
    for (auto& v : neg.values) v = Int4(-v.value);
    const Bf16Matrix x = random_inputs(rng, 8, 3);
    const Bf16Matrix a = gemm(w, x, 8);
    const Bf16Matrix b = gemm(neg, x, 8);
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 3; ++n) {
        const float va = to_float(a.at(m, n));
        const float vb = to_float(b.at(m, n));
        CHECK(va == -vb);
      }
  }
}

TEST_CASE("gemm result is independent of the tiling height") {
  std::mt19937 rng(34);
  const Int4Matrix w = random_weights(rng, 20, 16, 8);
  const Bf16Matrix x = random_inputs(rng, 16, 11);
  const Bf16Matrix a = gemm(w, x, 1);
  const Bf16Matrix b = gemm(w, x, 8);
  const Bf16Matrix c = gemm(w, x, 64);
  for (int m = 0; m < 20; ++m)
    for (int n = 0; n < 11; ++n) {
      CHECK(a.at(m, n).bits == b.at(m, n).bits);
      CHECK(b.at(m, n).bits == c.at(m, n).bits);
    }
}

TEST_CASE("gemm contract violations") {
  CHECK_THROWS_AS(Int4Matrix(2, 10, 3), std::invalid_argument);  // group must divide K
  Int4Matrix w(2, 4, 2);
  Bf16Matrix x(5, 2);  // K mismatch
  CHECK_THROWS_AS(gemm(w, x, 8), std::invalid_argument);
}
