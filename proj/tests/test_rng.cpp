// Copyright 2026 The dapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <stdexcept>

#include <array>
#include <set>

#include "dapt/rng.hpp"

namespace dapt {

// Reference values come from an independent Python implementation of the
// published splitmix64 / xoshiro256** / FNV-1a algorithms.

TEST_CASE("splitmix64 matches reference outputs") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(42) == 0xbdd732262feb6e95ULL);
}

TEST_CASE("xoshiro256** stream matches reference") {
  Rng a(42);
  CHECK(a.next() == 0x15780b2e0c2ec716ULL);
  CHECK(a.next() == 0x6104d9866d113a7eULL);
  CHECK(a.next() == 0xae17533239e499a1ULL);
  Rng b(0);
  CHECK(b.next() == 0x99ec5f36cb75f2b4ULL);
  CHECK(b.next() == 0xbf6e1f784956452aULL);
}

TEST_CASE("fnv1a64 matches reference") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("doc-1") == 0x42d4e5ab72fc8a9bULL);
  Fnv1a64 h;
  h.update("doc-1");
  CHECK(h.digest() == fnv1a64("doc-1"));
  CHECK(h.hex() == "42d4e5ab72fc8a9b");
}

TEST_CASE("length-prefixed fields disambiguate concatenations") {
  Fnv1a64 a, b;
  a.update_field("ab");
  a.update_field("c");
  b.update_field("a");
  b.update_field("bc");
  CHECK(a.digest() != b.digest());
}

TEST_CASE("derived seeds separate module streams") {
  CHECK(derive_seed(7, "mask") != derive_seed(7, "select.rand"));
  CHECK(derive_seed(7, "mask") == derive_seed(7, "mask"));
  CHECK(derive_seed(7, "mask") != derive_seed(8, "mask"));
}

TEST_CASE("uniform stays in [0, 1) and below() stays in range") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.below(7) < 7);
  }
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("below() is close to uniform") {
  Rng rng(123);
  std::array<int, 6> hist{};
  constexpr int kDraws = 600000;
  for (int i = 0; i < kDraws; ++i) ++hist[rng.below(6)];
  // Binomial sd is about 289 per bin; allow 5 sd.
  for (int c : hist) CHECK(std::abs(c - kDraws / 6) < 1450);
}

TEST_CASE("coin is fair to within 5 sd") {
  Rng rng(99);
  int heads = 0;
  constexpr int kFlips = 400000;
  for (int i = 0; i < kFlips; ++i) heads += rng.coin();
  CHECK(std::abs(heads - kFlips / 2) < 5 * 316);
}

TEST_CASE("same seed, same stream") {
  Rng a(2024), b(2024);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
}

}  // namespace dapt
