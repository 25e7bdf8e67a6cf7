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

#include <set>

#include "dapt/mask.hpp"
#include "dapt/rng.hpp"

namespace dapt {

namespace {

PackedSequence seq_of(std::string id, std::size_t n) {
  PackedSequence s;
  s.seq_id = std::move(id);
  s.doc_id = "doc";
  for (std::size_t i = 0; i < n; ++i) s.tokens.push_back("tok" + std::to_string(i));
  return s;
}

bool well_formed(const MaskedSequence& m) {
  std::set<std::size_t> pos(m.masked_positions.begin(), m.masked_positions.end());
  if (!std::is_sorted(m.masked_positions.begin(), m.masked_positions.end())) return false;
  if (pos.size() != m.masked_positions.size()) return false;
  if (m.originals.size() != m.masked_positions.size()) return false;
  for (std::size_t i = 0; i < m.tokens.size(); ++i)
    if ((m.tokens[i] == kMaskToken) != pos.contains(i)) return false;
  return pos.empty() || *pos.rbegin() < m.tokens.size();
}

}  // namespace

TEST_CASE("mask probability extremes") {
  const auto s = seq_of("s", 50);
  const auto none = mask_sequence(s, 0.0, 0, 1);
  CHECK(none.masked_positions.empty());
  CHECK(none.tokens == s.tokens);
  const auto all = mask_sequence(s, 1.0, 0, 1);
  CHECK(all.masked_positions.size() == 50);
  CHECK(all.originals == s.tokens);
  CHECK(std::all_of(all.tokens.begin(), all.tokens.end(),
                    [](const std::string& t) { return t == kMaskToken; }));
  CHECK_THROWS_AS(mask_sequence(s, 1.5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(mask_sequence(s, -0.1, 0, 1), std::invalid_argument);
}

TEST_CASE("mask set is a function of seed, seq_id and epoch") {
  const auto s = seq_of("abc:0", 128);
  CHECK(mask_sequence(s, 0.15, 3, 42) == mask_sequence(s, 0.15, 3, 42));
  CHECK(mask_sequence(s, 0.15, 3, 42).masked_positions !=
        mask_sequence(s, 0.15, 4, 42).masked_positions);
  CHECK(mask_sequence(s, 0.15, 3, 42).masked_positions !=
        mask_sequence(s, 0.15, 3, 43).masked_positions);
  // Stream derivation: splitmix64(seed ^ fnv(seq_id) ^ epoch), one uniform per token.
  Rng rng(splitmix64(42 ^ fnv1a64("abc:0") ^ 3));
  std::vector<std::size_t> expect;
  for (std::size_t i = 0; i < 128; ++i)
    if (rng.uniform() < 0.15) expect.push_back(i);
  CHECK(mask_sequence(s, 0.15, 3, 42).masked_positions == expect);
}

TEST_CASE("augment_epochs emits epoch-major streams") {
  const std::vector<PackedSequence> corpus = {seq_of("a", 10), seq_of("b", 10), seq_of("c", 10)};
  std::vector<std::pair<std::size_t, std::string>> order;
  augment_epochs(corpus, 2, 0.15, 5, [&](const MaskedSequence& m) {
    order.emplace_back(m.epoch, m.seq_id);
    CHECK(m == mask_sequence(corpus[order.size() % 3 == 0 ? 2 : order.size() % 3 - 1], 0.15,
                             m.epoch, 5));
  });
  CHECK(order == std::vector<std::pair<std::size_t, std::string>>{
                     {0, "a"}, {0, "b"}, {0, "c"}, {1, "a"}, {1, "b"}, {1, "c"}});
  std::size_t n = 0;
  augment_epochs(corpus, 1, 0.15, 5, [&](const MaskedSequence&) { ++n; });
  CHECK(n == 3);
  CHECK_THROWS_AS(augment_epochs(corpus, 0, 0.15, 5, [](const MaskedSequence&) {}),
                  std::invalid_argument);
}

TEST_CASE("property: unmask reconstructs the source sequence") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    PackedSequence s;
    s.seq_id = "s" + std::to_string(trial);
    const auto n = rng.below(40);
    for (std::uint64_t i = 0; i < n; ++i)
      s.tokens.push_back(rng.coin() ? "\\<mask>" : "w" + std::to_string(rng.below(9)));
    const double p = rng.uniform();
    const auto m = mask_sequence(s, p, rng.below(100), rng.next());
    REQUIRE(well_formed(m));
    REQUIRE(unmask(m) == s.tokens);
  }
}

TEST_CASE("to_json field layout") {
  const auto m = mask_sequence(seq_of("x:0", 3), 1.0, 2, 0);
  CHECK(to_json(m).dump() ==
        R"({"seq_id":"x:0","epoch":2,"tokens":["<mask>","<mask>","<mask>"],)"
        R"("masked_positions":[0,1,2],"originals":["tok0","tok1","tok2"]})");
}

}  // namespace dapt
