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

#include "dapt/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>

#include "dapt/errors.hpp"
#include "dapt/jsonl.hpp"
#include "dapt/parallel.hpp"
#include "dapt/rng.hpp"
#include "dapt/text.hpp"

namespace dapt {

namespace fs = std::filesystem;

std::string EmbedderModel::fingerprint() const {
  Fnv1a64 h;
  h.update_field("tfidf-projection-v1");
  h.update_u64(num_sentences);
  h.update_u64(dim);
  h.update_u64(seed);
  h.update_field(fitted_on);
  h.update_u64(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    h.update_field(terms[i]);
    h.update_u64(df[i]);
  }
  for (Eigen::Index i = 0; i < projection.size(); ++i)
    h.update_u64(std::bit_cast<std::uint32_t>(projection.data()[i]));
  return h.hex();
}

std::ptrdiff_t EmbedderModel::term_index(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

void EmbedderModel::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < terms.size(); ++i) index_.emplace(terms[i], i);
}

Eigen::RowVectorXf projection_row(std::string_view term, std::size_t dim,
                                  std::uint64_t seed) {
  Rng rng(splitmix64(seed ^ fnv1a64(term)));
  const float scale = 1.0f / std::sqrt(static_cast<float>(dim));
  Eigen::RowVectorXf row(static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = rng.coin() ? scale : -scale;
  return row;
}

double smoothed_idf(std::size_t num_sentences, std::uint64_t df) {
  return std::log((1.0 + static_cast<double>(num_sentences)) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

std::string corpus_fingerprint(std::span<const SentenceRecord> sentences) {
  Fnv1a64 h;
  h.update_u64(sentences.size());
  for (const auto& s : sentences) {
    h.update_field(s.sent_id);
    h.update_field(s.text);
  }
  return h.hex();
}

EmbedderModel fit_embedder(std::span<const SentenceRecord> sentences, std::size_t dim,
                           std::size_t max_vocab, std::uint64_t seed) {
  if (sentences.empty()) throw DataError("fit_embedder: empty sentence list");
  if (dim == 0) throw std::invalid_argument("fit_embedder: dim must be >= 1");
  if (max_vocab == 0) throw std::invalid_argument("fit_embedder: max_vocab must be >= 1");

  std::map<std::string, std::uint64_t> df;
  for (const auto& s : sentences) {
    auto toks = tokenize(s.text, TokenizeMode::kAnalysis);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) ++df[std::move(t)];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(df.begin(), df.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_vocab) ranked.resize(max_vocab);

  EmbedderModel model;
  model.num_sentences = sentences.size();
  model.dim = dim;
  model.seed = seed;
  model.fitted_on = corpus_fingerprint(sentences);
  model.projection.resize(static_cast<Eigen::Index>(ranked.size()),
                          static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    model.terms.push_back(ranked[i].first);
    model.df.push_back(ranked[i].second);
    model.idf.push_back(smoothed_idf(model.num_sentences, ranked[i].second));
    model.projection.row(static_cast<Eigen::Index>(i)) =
        projection_row(ranked[i].first, dim, seed);
  }
  model.rebuild_index();
  return model;
}

namespace {

// (vocabulary index, tf * idf), ascending by index.
std::vector<std::pair<std::size_t, double>> sparse_bag(const EmbedderModel& model,
                                                       std::string_view text) {
  std::vector<std::size_t> hits;
  for (const auto& tok : tokenize(text, TokenizeMode::kAnalysis)) {
    const auto i = model.term_index(tok);
    if (i >= 0) hits.push_back(static_cast<std::size_t>(i));
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i : hits) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += 1.0;
    } else {
      out.emplace_back(i, 1.0);
    }
  }
  for (auto& [i, w] : out) w *= model.idf[i];
  return out;
}

}  // namespace

Eigen::VectorXd TfidfProjectionEmbedder::bag(std::string_view text) const {
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model_.terms.size()));
  for (const auto& [i, w] : sparse_bag(model_, text)) weights(static_cast<Eigen::Index>(i)) = w;
  return weights;
}

Eigen::VectorXf TfidfProjectionEmbedder::embed(std::string_view text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model_.dim));
  // Sequential accumulation in vocabulary order keeps each row bit-stable.
  for (const auto& [i, w] : sparse_bag(model_, text)) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < v.size(); ++j)
      v(j) += w * static_cast<double>(model_.projection(row, j));
  }
  const double norm = v.norm();
  if (norm > 0) v /= norm;
  return v.cast<float>();
}

bool EmbeddingMatrix::is_zero_row(std::size_t i) const {
  return vectors.row(static_cast<Eigen::Index>(i)).isZero(0);
}

std::vector<std::size_t> EmbeddingMatrix::zero_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows(); ++i)
    if (is_zero_row(i)) out.push_back(i);
  return out;
}

EmbeddingMatrix embed_batch(const SentenceEmbedder& embedder,
                            std::span<const SentenceRecord> sentences,
                            std::size_t threads) {
  EmbeddingMatrix m;
  m.model_fingerprint = embedder.fingerprint();
  m.vectors.resize(static_cast<Eigen::Index>(sentences.size()),
                   static_cast<Eigen::Index>(embedder.dim()));
  for (const auto& s : sentences) m.ids.push_back(s.sent_id);
  parallel_for(sentences.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      m.vectors.row(static_cast<Eigen::Index>(i)) = embedder.embed(sentences[i].text).transpose();
  });
  return m;
}

EmbeddingMatrix embed_batch(const EmbedderModel& model,
                            std::span<const SentenceRecord> sentences,
                            std::size_t threads) {
  return embed_batch(TfidfProjectionEmbedder(model), sentences, threads);
}

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

fs::path sidecar(const fs::path& path, const char* suffix) {
  fs::path p = path;
  p += suffix;
  return p;
}

}  // namespace

void write_embeddings(const fs::path& path, const EmbeddingMatrix& m) {
  if (m.rows() > 0xffffffffULL || m.dim() > 0xffffffffULL)
    throw DataError("embedding matrix too large for EMB1");
  {
    io::AtomicFile file(path);
    auto& out = file.stream();
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.dim()));
    for (Eigen::Index i = 0; i < m.vectors.size(); ++i)
      put_u32(out, std::bit_cast<std::uint32_t>(m.vectors.data()[i]));
    file.commit();
  }
  std::string ids;
  for (const auto& id : m.ids) ids += id + "\n";
  io::write_text_atomic(sidecar(path, ".ids"), ids);
  io::write_text_atomic(sidecar(path, ".meta.json"),
                        nlohmann::ordered_json{{"model_fingerprint", m.model_fingerprint},
                                       {"rows", m.rows()},
                                       {"dim", m.dim()}}
                                .dump() +
                            "\n");
}

EmbeddingMatrix read_embeddings(const fs::path& path) {
  const std::string bytes = io::read_text(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw DataError(path.string() + ": not an EMB1 file");
  const std::uint32_t rows = get_u32(p + 4);
  const std::uint32_t dim = get_u32(p + 8);
  if (bytes.size() != 12 + 4ULL * rows * dim)
    throw DataError(path.string() + ": size does not match header (" + std::to_string(rows) +
                    " x " + std::to_string(dim) + ")");
  EmbeddingMatrix m;
  m.vectors.resize(rows, dim);
  for (Eigen::Index i = 0; i < m.vectors.size(); ++i) {
    const float f = std::bit_cast<float>(get_u32(p + 12 + 4 * i));
    if (std::isnan(f)) throw DataError(path.string() + ": NaN entry");
    m.vectors.data()[i] = f;
  }
  const std::string ids = io::read_text(sidecar(path, ".ids"));
  std::size_t start = 0;
  while (start < ids.size()) {
    const std::size_t nl = ids.find('\n', start);
    m.ids.push_back(ids.substr(start, nl - start));
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  if (m.ids.size() != rows)
    throw DataError(path.string() + ".ids: " + std::to_string(m.ids.size()) +
                    " ids for " + std::to_string(rows) + " rows");
  const auto meta = nlohmann::ordered_json::parse(io::read_text(sidecar(path, ".meta.json")),
                                          nullptr, false);
  if (meta.is_discarded() || !meta.contains("model_fingerprint") ||
      !meta["model_fingerprint"].is_string())
    throw DataError(path.string() + ".meta.json: field \"model_fingerprint\" missing");
  m.model_fingerprint = meta["model_fingerprint"].get<std::string>();
  return m;
}

nlohmann::ordered_json model_to_json(const EmbedderModel& model) {
  return nlohmann::ordered_json{{"kind", "tfidf-projection"},
                        {"dim", model.dim},
                        {"seed", model.seed},
                        {"num_sentences", model.num_sentences},
                        {"fitted_on", model.fitted_on},
                        {"terms", model.terms},
                        {"df", model.df},
                        {"fingerprint", model.fingerprint()}};
}

EmbedderModel model_from_json(const nlohmann::ordered_json& j) {
  EmbedderModel model;
  try {
    model.dim = j.at("dim").get<std::size_t>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.num_sentences = j.at("num_sentences").get<std::size_t>();
    model.fitted_on = j.at("fitted_on").get<std::string>();
    model.terms = j.at("terms").get<std::vector<std::string>>();
    model.df = j.at("df").get<std::vector<std::uint64_t>>();
  } catch (const nlohmann::ordered_json::exception& e) {
    throw DataError(std::string("embedder model: ") + e.what());
  }
  if (model.terms.size() != model.df.size())
    throw DataError("embedder model: terms and df lengths differ");
  if (model.dim == 0) throw DataError("embedder model: dim must be >= 1");
  model.projection.resize(static_cast<Eigen::Index>(model.terms.size()),
                          static_cast<Eigen::Index>(model.dim));
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    model.idf.push_back(smoothed_idf(model.num_sentences, model.df[i]));
    model.projection.row(static_cast<Eigen::Index>(i)) =
        projection_row(model.terms[i], model.dim, model.seed);
  }
  model.rebuild_index();
  if (j.contains("fingerprint") && j["fingerprint"] != model.fingerprint())
    throw DataError("embedder model: fingerprint mismatch after reload");
  return model;
}

}  // namespace dapt
