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

#include "dapt/select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "json.hpp"

#include "dapt/errors.hpp"
#include "dapt/jsonl.hpp"
#include "dapt/parallel.hpp"
#include "dapt/rng.hpp"
#include "dapt/text.hpp"

namespace dapt {

namespace {

constexpr Eigen::Index kCandidateBlock = 1024;
constexpr Eigen::Index kQueryTile = 32;
constexpr double kNormTolerance = 1e-5;

struct Scored {
  double score;
  Eigen::Index row;
};

}  // namespace

FlatIndex::FlatIndex(const EmbeddingMatrix& emb) {
  if (emb.vectors.hasNaN()) throw DataError("build_index: embedding matrix contains NaN");
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < emb.rows(); ++i) {
    if (emb.is_zero_row(i)) {
      ++excluded_;
    } else {
      keep.push_back(static_cast<Eigen::Index>(i));
    }
  }
  if (keep.empty()) throw DataError("build_index: no nonzero rows to index");
  rows_.resize(static_cast<Eigen::Index>(keep.size()), emb.vectors.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    rows_.row(static_cast<Eigen::Index>(r)) = emb.vectors.row(keep[r]);
    ids_.push_back(emb.ids[static_cast<std::size_t>(keep[r])]);
  }
}

std::vector<std::vector<Neighbor>> FlatIndex::search(const RowMatrix<float>& queries,
                                                     std::size_t k,
                                                     std::size_t threads) const {
  if (k == 0) throw std::invalid_argument("knn: k must be >= 1");
  if (queries.cols() != rows_.cols())
    throw std::invalid_argument("knn: query dim " + std::to_string(queries.cols()) +
                                " does not match index dim " + std::to_string(rows_.cols()));
  const Eigen::Index n = rows_.rows();
  const std::size_t k_eff = std::min<std::size_t>(k, static_cast<std::size_t>(n));
  const auto better = [this](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return ids_[static_cast<std::size_t>(a.row)] < ids_[static_cast<std::size_t>(b.row)];
  };

  std::vector<std::vector<Neighbor>> results(static_cast<std::size_t>(queries.rows()));
  const auto tiles = static_cast<std::size_t>((queries.rows() + kQueryTile - 1) / kQueryTile);
  // Tiles and blocks sit at fixed offsets, so each score is computed the
  // same way whatever the thread count.
  parallel_for(tiles, threads, [&](std::size_t tile_begin, std::size_t tile_end) {
    for (std::size_t t = tile_begin; t < tile_end; ++t) {
      const Eigen::Index q0 = static_cast<Eigen::Index>(t) * kQueryTile;
      const Eigen::Index nq = std::min(kQueryTile, queries.rows() - q0);
      const Eigen::MatrixXd q = queries.middleRows(q0, nq).cast<double>().transpose();
      std::vector<std::vector<Scored>> heaps(static_cast<std::size_t>(nq));
      for (auto& h : heaps) h.reserve(k_eff + 1);
      for (Eigen::Index b0 = 0; b0 < n; b0 += kCandidateBlock) {
        const Eigen::Index nb = std::min(kCandidateBlock, n - b0);
        const Eigen::MatrixXd scores = rows_.middleRows(b0, nb).cast<double>() * q;
        for (Eigen::Index qi = 0; qi < nq; ++qi) {
          auto& heap = heaps[static_cast<std::size_t>(qi)];
          for (Eigen::Index r = 0; r < nb; ++r) {
            const Scored s{scores(r, qi), b0 + r};
            if (heap.size() < k_eff) {
              heap.push_back(s);
              std::push_heap(heap.begin(), heap.end(), better);
            } else if (better(s, heap.front())) {
              std::pop_heap(heap.begin(), heap.end(), better);
              heap.back() = s;
              std::push_heap(heap.begin(), heap.end(), better);
            }
          }
        }
      }
      for (Eigen::Index qi = 0; qi < nq; ++qi) {
        auto& heap = heaps[static_cast<std::size_t>(qi)];
        std::sort_heap(heap.begin(), heap.end(), better);
        auto& out = results[static_cast<std::size_t>(q0 + qi)];
        out.reserve(heap.size());
        for (const auto& s : heap)
          out.push_back({ids_[static_cast<std::size_t>(s.row)], std::clamp(s.score, -1.0, 1.0)});
      }
    }
  });
  return results;
}

FlatIndex build_index(const EmbeddingMatrix& emb) { return FlatIndex(emb); }

std::vector<Neighbor> knn_query(const FlatIndex& index,
                                const Eigen::Ref<const Eigen::VectorXf>& q, std::size_t k) {
  const double norm = q.cast<double>().norm();
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw std::invalid_argument("knn_query: query is not unit norm (norm=" +
                                std::to_string(norm) + ")");
  RowMatrix<float> one = q.transpose();
  return std::move(index.search(one, k).front());
}

std::string_view to_string(SelectionMethod m) {
  return m == SelectionMethod::kKnn ? "knn" : "rand";
}

SelectionMethod parse_selection_method(std::string_view s) {
  if (s == "knn") return SelectionMethod::kKnn;
  if (s == "rand") return SelectionMethod::kRand;
  throw std::invalid_argument("unknown selection method: " + std::string(s));
}

namespace {

void finalize_pool(SelectionResult& r) {
  std::unordered_set<std::string_view> seen;
  r.stats.queries = r.per_query.size();
  r.stats.total_pairs = 0;
  for (const auto& q : r.per_query) {
    r.stats.total_pairs += q.neighbors.size();
    for (const auto& nb : q.neighbors)
      if (seen.insert(nb.id).second) r.selected_pool.push_back(nb.id);
  }
  r.stats.unique_candidates = r.selected_pool.size();
}

}  // namespace

SelectionResult select_knn(const EmbeddingMatrix& task_emb, const EmbeddingMatrix& domain_emb,
                           std::size_t k, std::size_t threads) {
  if (task_emb.model_fingerprint != domain_emb.model_fingerprint)
    throw DataError("select_knn: embedder fingerprint mismatch (task " +
                    task_emb.model_fingerprint + ", domain " +
                    domain_emb.model_fingerprint + ")");
  const FlatIndex index(domain_emb);
  SelectionResult r;
  r.k = k;
  r.method = SelectionMethod::kKnn;
  r.stats.excluded_zero_candidates = index.excluded_zero_rows();

  std::vector<Eigen::Index> live;
  for (std::size_t i = 0; i < task_emb.rows(); ++i) {
    if (task_emb.is_zero_row(i)) {
      ++r.stats.skipped_zero_queries;
      continue;
    }
    const double norm = task_emb.vectors.row(static_cast<Eigen::Index>(i)).cast<double>().norm();
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw DataError("select_knn: task row " + task_emb.ids[i] + " is not unit norm");
    live.push_back(static_cast<Eigen::Index>(i));
  }
  RowMatrix<float> queries(static_cast<Eigen::Index>(live.size()), task_emb.vectors.cols());
  for (std::size_t i = 0; i < live.size(); ++i)
    queries.row(static_cast<Eigen::Index>(i)) = task_emb.vectors.row(live[i]);
  auto hits = index.search(queries, k, threads);
  for (std::size_t i = 0; i < live.size(); ++i)
    r.per_query.push_back({task_emb.ids[static_cast<std::size_t>(live[i])], std::move(hits[i])});
  finalize_pool(r);
  return r;
}

SelectionResult select_random(std::span<const std::string> query_ids,
                              std::span<const std::string> pool, std::size_t k,
                              std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("select_random: k must be >= 1");
  if (pool.empty()) throw DataError("select_random: empty candidate pool");
  SelectionResult r;
  r.k = k;
  r.method = SelectionMethod::kRand;
  Rng rng(seed);
  const std::size_t draws = std::min(k, pool.size());
  for (const auto& qid : query_ids) {
    QueryNeighbors q{qid, {}};
    q.neighbors.reserve(draws);
    for (std::size_t d = 0; d < draws; ++d)
      q.neighbors.push_back({pool[static_cast<std::size_t>(rng.below(pool.size()))], 0.0});
    r.per_query.push_back(std::move(q));
  }
  finalize_pool(r);
  return r;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kTask: return "task";
    case Provenance::kKnn: return "knn";
    case Provenance::kRand: return "rand";
    case Provenance::kCurated: return "curated";
  }
  return "task";
}

std::size_t AugmentedCorpus::count(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [p](const CorpusEntry& e) { return e.provenance == p; }));
}

AugmentedCorpus assemble_corpus(std::span<const SentenceRecord> task,
                                const SelectionResult* selection,
                                std::span<const SentenceRecord> domain,
                                std::span<const SentenceRecord> curated) {
  AugmentedCorpus out;
  std::unordered_set<std::string> seen_text;
  const auto add = [&](const std::string& id, const std::string& text, Provenance p) {
    if (seen_text.emplace(trim(text)).second) out.entries.push_back({id, text, p});
  };
  for (const auto& s : task) add(s.sent_id, s.text, Provenance::kTask);
  if (selection != nullptr) {
    std::unordered_map<std::string_view, const SentenceRecord*> by_id;
    for (const auto& s : domain) by_id.emplace(s.sent_id, &s);
    const Provenance p =
        selection->method == SelectionMethod::kKnn ? Provenance::kKnn : Provenance::kRand;
    for (const auto& id : selection->selected_pool) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError("assemble_corpus: unknown candidate id " + id);
      add(id, it->second->text, p);
    }
  }
  for (const auto& s : curated) add(s.sent_id, s.text, Provenance::kCurated);
  return out;
}

std::vector<Document> corpus_documents(const AugmentedCorpus& corpus) {
  std::vector<Document> docs;
  docs.reserve(corpus.entries.size());
  for (const auto& e : corpus.entries)
    docs.push_back({std::string(to_string(e.provenance)) + "/" + e.id,
                    std::string(to_string(e.provenance)), e.text});
  return docs;
}

std::string selection_to_jsonl(const SelectionResult& r) {
  std::string out;
  for (const auto& q : r.per_query) {
    nlohmann::ordered_json neighbors = nlohmann::ordered_json::array();
    for (const auto& nb : q.neighbors) neighbors.push_back({{"id", nb.id}, {"score", nb.score}});
    out += nlohmann::ordered_json{{"query_id", q.query_id},
                          {"method", to_string(r.method)},
                          {"k", r.k},
                          {"neighbors", std::move(neighbors)}}
               .dump();
    out += '\n';
  }
  return out;
}

SelectionResult selection_from_jsonl(const std::filesystem::path& path) {
  SelectionResult r;
  bool first = true;
  io::for_each_jsonl(path, [&](const nlohmann::ordered_json& obj, std::size_t line) {
    const auto method = io::get_string(obj, "method", line);
    const auto k = io::get_int(obj, "k", line);
    if (method != "knn" && method != "rand")
      throw DataError(std::to_string(line) + ": field \"method\" must be knn or rand");
    if (k < 1) throw DataError(std::to_string(line) + ": field \"k\" must be >= 1");
    if (first) {
      r.method = parse_selection_method(method);
      r.k = static_cast<std::size_t>(k);
      first = false;
    } else if (method != to_string(r.method) || static_cast<std::size_t>(k) != r.k) {
      throw DataError(std::to_string(line) + ": mixed method or k within one selection");
    }
    QueryNeighbors q{io::get_string(obj, "query_id", line), {}};
    const auto it = obj.find("neighbors");
    if (it == obj.end() || !it->is_array())
      throw DataError(std::to_string(line) + ": field \"neighbors\" missing or not an array");
    for (const auto& nb : *it) {
      if (!nb.is_object() || !nb.contains("score") || !nb["score"].is_number())
        throw DataError(std::to_string(line) + ": field \"neighbors\" entry lacks a score");
      q.neighbors.push_back({io::get_string(nb, "id", line), nb["score"].get<double>()});
    }
    r.per_query.push_back(std::move(q));
  });
  finalize_pool(r);
  return r;
}

std::string pool_to_text(const SelectionResult& r) {
  std::string out;
  for (const auto& id : r.selected_pool) out += id + "\n";
  return out;
}

std::string dump_neighbors(const SelectionResult& r,
                           const std::unordered_map<std::string, std::string>& texts,
                           std::size_t n) {
  const auto text_of = [&](const std::string& id) -> std::string {
    const auto it = texts.find(id);
    return it == texts.end() ? "<" + id + ">" : it->second;
  };
  std::string out;
  char buf[64];
  for (const auto& q : r.per_query) {
    out += "Source [" + q.query_id + "]: " + text_of(q.query_id) + "\n";
    for (std::size_t i = 0; i < std::min(n, q.neighbors.size()); ++i) {
      std::snprintf(buf, sizeof buf, "Neighbor %zu (%.4f) ", i, q.neighbors[i].score);
      out += buf;
      out += "[" + q.neighbors[i].id + "]: " + text_of(q.neighbors[i].id) + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace dapt
