// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "starsr/random.hpp"

using starsr::Philox;

TEST_CASE("philox stream is a pure function of seed and stream") {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int k = 0; k < 64; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniform draws lie in [0, 1) with mean near one half") {
  Philox rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal and complex normal moments") {
  Philox rng(3);
  const int n = 100000;
  double m1 = 0.0, m2 = 0.0, c2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    m1 += z;
    m2 += z * z;
    c2 += std::norm(rng.complex_normal());
  }
  CHECK(std::abs(m1 / n) < 0.02);
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(c2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_index covers the range without bias") {
  Philox rng(9);
  std::vector<int> counts(5, 0);
  for (int k = 0; k < 50000; ++k) ++counts[rng.uniform_index(5)];
  for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("mix_seed separates its inputs") {
  using starsr::mix_seed;
  CHECK(mix_seed({1, 2}) == mix_seed({1, 2}));
  CHECK(mix_seed({1, 2}) != mix_seed({2, 1}));
  CHECK(mix_seed({1}) != mix_seed({1, 0}));
}

TEST_CASE("shuffle is a permutation") {
  Philox rng(5);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < 8; ++k) CHECK(sorted[k] == k);
}
