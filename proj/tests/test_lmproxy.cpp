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

#include <algorithm>
#include <cmath>

#include "dapt/errors.hpp"
#include "dapt/lmproxy.hpp"
#include "dapt/rng.hpp"

namespace dapt {

namespace {

std::vector<Document> docs_of(std::initializer_list<const char*> texts) {
  std::vector<Document> out;
  int i = 0;
  for (const char* t : texts) out.push_back({"d" + std::to_string(i++), "x", t});
  return out;
}

std::vector<Document> topic_docs(const std::string& topic, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Document> out;
  for (std::size_t d = 0; d < n; ++d) {
    std::string text;
    const auto len = 8 + rng.below(12);
    for (std::uint64_t w = 0; w < len; ++w) text += topic + std::to_string(rng.below(30)) + " ";
    out.push_back({topic + std::to_string(d), topic, text});
  }
  return out;
}

}  // namespace

TEST_CASE("unigram additive smoothing by hand") {
  const double a = 0.1;
  const auto lm = NgramLM::train(docs_of({"a a b"}), 1, a);
  CHECK(lm.vocab_size() == 2);
  const std::vector<std::string> none;
  CHECK(lm.prob(none, "a") == doctest::Approx((2 + a) / (3 + a * 3)).epsilon(1e-15));
  CHECK(lm.prob(none, "b") == doctest::Approx((1 + a) / (3 + a * 3)).epsilon(1e-15));
  CHECK(lm.prob(none, "zzz") == doctest::Approx(a / (3 + a * 3)).epsilon(1e-15));
}

TEST_CASE("conditionals sum to one per context") {
  const auto lm = NgramLM::train(docs_of({"a b c a b", "b c d", "a"}), 3, 0.1);
  const std::vector<std::vector<std::string>> contexts = {
      {"<s>", "<s>"}, {"<s>", "a"}, {"a", "b"}, {"b", "c"}, {"never", "seen"}};
  for (const auto& c : contexts) CHECK(std::abs(lm.context_mass(c) - 1.0) < 1e-9);
}

TEST_CASE("large alpha approaches uniform") {
  const auto lm = NgramLM::train(docs_of({"a a a a b"}), 1, 1e12);
  const std::vector<std::string> none;
  CHECK(lm.prob(none, "a") == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(lm.prob(none, "b") == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("training is deterministic and validated") {
  const auto c = docs_of({"x y z", "y z"});
  CHECK(NgramLM::train(c, 3, 0.1) == NgramLM::train(c, 3, 0.1));
  CHECK_THROWS_AS(NgramLM::train({}, 3, 0.1), DataError);
  CHECK_THROWS_AS(NgramLM::train(c, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(NgramLM::train(c, 3, 0.0), std::invalid_argument);
}

TEST_CASE("eval_loss on a degenerate single-token corpus") {
  const double a = 0.01;
  const auto c = docs_of({"x x x x"});
  const auto lm = NgramLM::train(c, 1, a);
  const double n = 4, V = 1;
  CHECK(eval_loss(lm, c) == doctest::Approx(-std::log((n + a) / (n + a * (V + 1)))).epsilon(1e-12));
}

TEST_CASE("uniform model loss is ln(V+1)") {
  const auto lm = NgramLM::untrained({"a", "b", "c"}, 2, 0.5);
  CHECK(eval_loss(lm, docs_of({"a b c d", "q"})) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("eval_loss ignores held-out order") {
  const auto train = topic_docs("w", 30, 1);
  auto held = topic_docs("w", 20, 2);
  const auto lm = NgramLM::train(train, 3, 0.1);
  const double before = eval_loss(lm, held);
  std::reverse(held.begin(), held.end());
  CHECK(eval_loss(lm, held) == before);
  CHECK(before > 0);
  CHECK(std::isfinite(before));
  CHECK_THROWS_AS(eval_loss(lm, {}), DataError);
}

TEST_CASE("identical corpora give equal rows") {
  const auto docs = topic_docs("t", 40, 3);
  const std::vector<DomainCorpus> domains = {{"one", docs}, {"two", docs}};
  const auto m = cross_domain_matrix(domains, 3, 0.1, 0.2, 11);
  CHECK(std::abs(m.loss(0, 0) - m.loss(0, 1)) < 1e-9);
  CHECK(std::abs(m.loss(1, 0) - m.loss(1, 1)) < 1e-9);
}

TEST_CASE("disjoint topic vocabularies give a strict diagonal minimum") {
  const std::vector<DomainCorpus> domains = {{"bio", topic_docs("bio", 60, 4)},
                                             {"cs", topic_docs("cs", 60, 5)},
                                             {"news", topic_docs("news", 60, 6)}};
  const auto m = cross_domain_matrix(domains, 3, 0.1, 0.2, 7);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(m.loss(i, j) > 0);
      if (i != j) CHECK(m.loss(i, i) < m.loss(i, j));
    }
  const auto tsv = loss_matrix_to_tsv(m);
  CHECK(tsv.rfind("model\\eval\tbio\tcs\tnews\n", 0) == 0);
}

TEST_CASE("cross_domain_matrix rejects unsplittable domains") {
  const std::vector<DomainCorpus> domains = {{"a", docs_of({"only one"})},
                                             {"b", topic_docs("b", 10, 1)}};
  CHECK_THROWS_AS(cross_domain_matrix(domains, 2, 0.1, 0.2, 1), DataError);
}

}  // namespace dapt
