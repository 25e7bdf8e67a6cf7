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
#include <stdexcept>

#include "dapt/rng.hpp"
#include "dapt/vocab.hpp"

namespace dapt {

namespace {

DomainVocabulary vocab_of(std::string domain, std::size_t k, std::vector<std::string> terms) {
  DomainVocabulary v;
  v.domain = std::move(domain);
  v.k = k;
  std::uint64_t c = terms.size();
  for (auto& t : terms) v.terms.push_back({std::move(t), c--});
  return v;
}

std::vector<std::string> terms_of(const DomainVocabulary& v) {
  std::vector<std::string> out;
  for (const auto& e : v.terms) out.push_back(e.term);
  return out;
}

std::vector<Document> docs_of(std::initializer_list<const char*> texts) {
  std::vector<Document> out;
  int i = 0;
  for (const char* t : texts) out.push_back({"d" + std::to_string(i++), "x", t});
  return out;
}

// A document in which term prefix+i occurs (base - i) times for i < n.
Document ranked_doc(const std::string& id, const std::vector<std::string>& terms,
                    std::size_t base) {
  std::string text;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t r = 0; r < base - i; ++r) text += terms[i] + " ";
  return {id, "x", text};
}

}  // namespace

TEST_CASE("bundled stopword list") {
  CHECK(default_stopwords().size() == 179);
  CHECK(default_stopwords().contains("the"));
  CHECK(default_stopwords_checksum() == "02024cde651fbd52");
  CHECK(parse_stopwords("# comment\nfoo\n\n Bar \n") == StopwordSet{"foo", "bar"});
}

TEST_CASE("build_vocabulary hand count") {
  const auto v = build_vocabulary(docs_of({"a a b", "b c"}), 2, {});
  CHECK(terms_of(v) == std::vector<std::string>{"a", "b"});
  CHECK(v.terms[0].count == 2);
  CHECK(v.terms[1].count == 2);
  CHECK(v.sample_docs == 2);
}

TEST_CASE("build_vocabulary edge cases") {
  CHECK(build_vocabulary(docs_of({"a a b", "b c"}), 2, {"a", "b", "c"}).size() == 0);
  CHECK(build_vocabulary(docs_of({"a a b", "b c"}), 10, {}).size() == 3);
  // Tie at rank k broken by ascending term.
  CHECK(terms_of(build_vocabulary(docs_of({"z y x"}), 2, {})) ==
        std::vector<std::string>{"x", "y"});
  // Analysis-mode tokens: case folded, punctuation stripped, stopwords removed.
  CHECK(terms_of(build_vocabulary(docs_of({"The Cell, the cell. CELLS 42"}), 5,
                                  default_stopwords())) ==
        std::vector<std::string>{"cell", "cells"});
  CHECK_THROWS_AS(build_vocabulary(docs_of({"a"}), 0, {}), std::invalid_argument);
}

TEST_CASE("build_vocabulary is invariant to document order") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Document> docs;
    for (int d = 0; d < 12; ++d) {
      std::string text;
      for (int w = 0; w < 20; ++w) text += "t" + std::to_string(rng.below(15)) + " ";
      docs.push_back({"d" + std::to_string(d), "x", text});
    }
    const auto a = build_vocabulary(docs, 6, {});
    std::reverse(docs.begin(), docs.end());
    const auto b = build_vocabulary(docs, 6, {});
    REQUIRE(a.terms == b.terms);
  }
}

TEST_CASE("TermCounts merge equals counting the union") {
  TermCounts a, b, all;
  a.add_text("x y y", {});
  b.add_text("y z", {});
  all.add_text("x y y", {});
  all.add_text("y z", {});
  a.merge(b);
  CHECK(a.counts() == all.counts());
}

TEST_CASE("overlap examples") {
  const auto a = vocab_of("a", 4, {"w1", "w2", "w3", "w4"});
  const auto b = vocab_of("b", 4, {"w3", "w4", "w5", "w6"});
  const auto c = vocab_of("c", 4, {"x1", "x2", "x3", "x4"});
  CHECK(overlap(a, a) == 100.0);
  CHECK(overlap(a, c) == 0.0);
  CHECK(overlap(a, b) == 50.0);
  CHECK(overlap(b, a) == 50.0);
  CHECK_THROWS_AS(overlap(a, vocab_of("d", 5, {"w1"})), std::invalid_argument);
}

TEST_CASE("overlap of undersized vocabularies keeps the identity at 100") {
  const auto a = vocab_of("a", 10, {"w1", "w2"});
  CHECK(overlap(a, a) == 100.0);
  CHECK(overlap(vocab_of("e", 10, {}), vocab_of("f", 10, {})) == 100.0);
}

TEST_CASE("overlap_matrix examples") {
  const auto a = vocab_of("a", 2, {"p", "q"});
  const std::vector<DomainVocabulary> same = {a, vocab_of("b", 2, {"q", "p"})};
  const auto m = overlap_matrix(same);
  CHECK(m.pct.isApproxToConstant(100.0));

  const std::vector<DomainVocabulary> disjoint = {
      a, vocab_of("b", 2, {"r", "s"}), vocab_of("c", 2, {"t", "u"})};
  const auto d = overlap_matrix(disjoint);
  CHECK(d.pct == 100.0 * Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(overlap_matrix(std::span<const DomainVocabulary>(disjoint.data(), 1)),
                  std::invalid_argument);
}

TEST_CASE("overlap_matrix on corpora built to share 40 percent") {
  // k = 10: four shared terms and six private terms per domain.
  const std::vector<std::string> shared = {"s0", "s1", "s2", "s3"};
  std::vector<DomainVocabulary> vocabs;
  for (const std::string d : {"alpha", "beta", "gamma"}) {
    std::vector<std::string> terms = shared;
    for (int i = 0; i < 6; ++i) terms.push_back(d + std::to_string(i));
    // Rare filler words that must fall outside the top 10.
    const std::vector<Document> docs = {ranked_doc(d + "-1", terms, 30),
                                        {d + "-2", "x", d + "rare1 " + d + "rare2"}};
    vocabs.push_back(build_vocabulary(docs, 10, {}));
    vocabs.back().domain = d;
  }
  const auto m = overlap_matrix(vocabs);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(m.pct(i, j) == (i == j ? 100.0 : 40.0));
  CHECK(overlap_to_tsv(m) ==
        "domain\talpha\tbeta\tgamma\n"
        "alpha\t100.0\t40.0\t40.0\n"
        "beta\t40.0\t100.0\t40.0\n"
        "gamma\t40.0\t40.0\t100.0\n");
}

TEST_CASE("pick_irrelevant_domain") {
  OverlapMatrix m;
  m.domains = {"t", "a", "b", "c"};
  m.pct.resize(4, 4);
  m.pct.setConstant(50);
  m.pct.row(0) << 100, 40, 19, 35;
  CHECK(pick_irrelevant_domain(m, "t") == "b");

  OverlapMatrix two;
  two.domains = {"x", "y"};
  two.pct = Eigen::Matrix2d{{100, 7}, {7, 100}};
  CHECK(pick_irrelevant_domain(two, "x") == "y");

  m.pct.row(0) << 100, 19, 19, 35;
  CHECK(pick_irrelevant_domain(m, "t") == "a");
  CHECK_THROWS_AS(pick_irrelevant_domain(m, "nope"), std::invalid_argument);
}

TEST_CASE("vocabulary TSV") {
  const auto v = build_vocabulary(docs_of({"a a b"}), 5, {});
  CHECK(vocabulary_to_tsv(v) == "a\t2\nb\t1\n");
}

}  // namespace dapt
