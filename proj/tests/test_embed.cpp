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

#include <cmath>
#include <fstream>

#include "dapt/embed.hpp"
#include "dapt/errors.hpp"
#include "test_util.hpp"

namespace dapt {

namespace {

std::vector<SentenceRecord> sents(std::initializer_list<const char*> texts) {
  std::vector<SentenceRecord> out;
  std::size_t i = 0;
  for (const char* t : texts) {
    out.push_back({"d#" + std::to_string(i), "d", i, t, 0});
    ++i;
  }
  return out;
}

}  // namespace

TEST_CASE("idf of a single two-term sentence") {
  const auto m = fit_embedder(sents({"a b"}), 8, 10, 1);
  CHECK(m.terms == std::vector<std::string>{"a", "b"});
  CHECK(m.df == std::vector<std::uint64_t>{1, 1});
  CHECK(m.idf[0] == 1.0);
  CHECK(m.idf[1] == 1.0);
  CHECK(smoothed_idf(3, 1) == doctest::Approx(std::log(2.0) + 1));
}

TEST_CASE("fit is deterministic and truncates by document frequency") {
  const auto s = sents({"a b", "a", "a c"});
  CHECK(fit_embedder(s, 16, 10, 4).fingerprint() == fit_embedder(s, 16, 10, 4).fingerprint());
  CHECK(fit_embedder(s, 16, 10, 4).fingerprint() != fit_embedder(s, 16, 10, 5).fingerprint());
  const auto m = fit_embedder(s, 16, 1, 4);
  CHECK(m.terms == std::vector<std::string>{"a"});
  CHECK(m.df[0] == 3);
  CHECK_THROWS_AS(fit_embedder({}, 16, 10, 4), DataError);
  CHECK_THROWS_AS(fit_embedder(s, 0, 10, 4), std::invalid_argument);
}

TEST_CASE("projection rows are signed and keyed by term and seed") {
  const auto r = projection_row("term", 64, 9);
  const float v = 1.0f / std::sqrt(64.0f);
  for (Eigen::Index j = 0; j < r.size(); ++j) CHECK(std::abs(r(j)) == v);
  CHECK(r == projection_row("term", 64, 9));
  CHECK(r != projection_row("term", 64, 10));
  CHECK(r != projection_row("other", 64, 9));
  // Roughly balanced signs.
  const auto pos = (r.array() > 0).count();
  CHECK(pos > 16);
  CHECK(pos < 48);
}

TEST_CASE("identical sentences embed identically") {
  const auto s = sents({"alpha beta gamma", "alpha beta gamma", "delta"});
  const auto m = fit_embedder(s, 32, 100, 2);
  const auto e = embed_batch(m, s);
  CHECK(e.vectors.row(0) == e.vectors.row(1));
  CHECK(cosine(e.vectors.row(0), e.vectors.row(1)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.ids == std::vector<std::string>{"d#0", "d#1", "d#2"});
}

TEST_CASE("disjoint bags are orthogonal under an identity projection") {
  const auto s = sents({"a b", "c d"});
  auto m = fit_embedder(s, 4, 100, 2);
  m.projection = RowMatrix<float>::Identity(4, 4);
  const TfidfProjectionEmbedder emb(m);
  CHECK(cosine(emb.embed("a b"), emb.embed("c d")) == 0.0);
}

TEST_CASE("three-term toy vocabulary matches hand calculation") {
  // n = 3; df(a) = 2, df(b) = df(c) = 1.
  const auto s = sents({"a b", "a", "c"});
  auto m = fit_embedder(s, 2, 100, 0);
  REQUIRE(m.terms == std::vector<std::string>{"a", "b", "c"});
  m.projection.resize(3, 2);
  m.projection << 1, 0, 0, 1, 1, 1;
  const TfidfProjectionEmbedder emb(m);
  // tf = (2, 1, 1); idf = (ln(4/3)+1, ln 2+1, ln 2+1).
  const auto bag = emb.bag("a a b c");
  CHECK(bag(0) == doctest::Approx(2 * 1.2876820724517808).epsilon(1e-12));
  CHECK(bag(1) == doctest::Approx(1.6931471805599454).epsilon(1e-12));
  CHECK(bag(2) == doctest::Approx(1.6931471805599454).epsilon(1e-12));
  const auto v = emb.embed("a a b c");
  CHECK(std::abs(v(0) - 0.7834151694588533) < 1e-6);
  CHECK(std::abs(v(1) - 0.6214987307000361) < 1e-6);
}

TEST_CASE("all-OOV sentence gives a flagged zero row") {
  const auto train = sents({"known words here"});
  const auto m = fit_embedder(train, 16, 100, 1);
  const auto e = embed_batch(m, sents({"known", "unseen tokens", "42"}));
  CHECK(e.zero_rows() == std::vector<std::size_t>{1, 2});
  CHECK(std::abs(e.vectors.row(0).norm() - 1.0f) <= 1e-5f);
}

TEST_CASE("rows are independent of batch composition and thread count") {
  std::vector<SentenceRecord> s;
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (int w = 0; w < 12; ++w) text += "w" + std::to_string(rng.below(200)) + " ";
    s.push_back({"s" + std::to_string(i), "d", 0, text, 0});
  }
  const auto m = fit_embedder(s, 64, 150, 8);
  const auto one = embed_batch(m, s, 1);
  const auto many = embed_batch(m, s, 7);
  CHECK(one.vectors == many.vectors);
  const std::vector<SentenceRecord> tail(s.begin() + 100, s.end());
  const auto part = embed_batch(m, tail, 3);
  CHECK(part.vectors == one.vectors.bottomRows(200));
  for (Eigen::Index i = 0; i < one.vectors.rows(); ++i) {
    if (one.is_zero_row(static_cast<std::size_t>(i))) continue;
    CHECK(std::abs(one.vectors.row(i).norm() - 1.0f) <= 1e-5f);
  }
}

TEST_CASE("embedding file round trip and validation") {
  testing::TempDir dir("embed");
  const auto m = fit_embedder(sents({"x y", "y z"}), 8, 10, 3);
  const auto e = embed_batch(m, sents({"x y", "z", "nothing"}));
  write_embeddings(dir / "e.emb", e);
  const auto r = read_embeddings(dir / "e.emb");
  CHECK(r.ids == e.ids);
  CHECK(r.vectors == e.vectors);
  CHECK(r.model_fingerprint == m.fingerprint());

  // Header is EMB1, rows, dim, little-endian.
  std::ifstream in(dir / "e.emb", std::ios::binary);
  unsigned char head[12];
  in.read(reinterpret_cast<char*>(head), 12);
  CHECK(std::string(reinterpret_cast<char*>(head), 4) == "EMB1");
  CHECK(head[4] == 3);
  CHECK(head[8] == 8);
  CHECK(std::filesystem::file_size(dir / "e.emb") == 12 + 3 * 8 * 4);

  std::filesystem::resize_file(dir / "e.emb", 20);
  CHECK_THROWS_AS(read_embeddings(dir / "e.emb"), DataError);
  CHECK_THROWS_AS(read_embeddings(dir / "missing.emb"), std::exception);
}

TEST_CASE("model JSON round trip preserves the fingerprint") {
  const auto m = fit_embedder(sents({"p q r", "q r", "r"}), 16, 10, 12);
  const auto back = model_from_json(model_to_json(m));
  CHECK(back.fingerprint() == m.fingerprint());
  CHECK(back.projection == m.projection);
  CHECK(back.term_index("q") == m.term_index("q"));
  auto j = model_to_json(m);
  j["seed"] = 13;
  CHECK_THROWS_AS(model_from_json(j), DataError);
}

}  // namespace dapt
