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

#ifndef DAPT_SELECT_HPP_
#define DAPT_SELECT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "dapt/corpus.hpp"
#include "dapt/embed.hpp"

namespace dapt {

struct Neighbor {
  std::string id;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact cosine search over unit-norm rows. Candidates are scanned in fixed
/// blocks with double accumulation; results are ranked by score descending,
/// then id ascending, so answers do not depend on row order.
class FlatIndex {
 public:
  /// Zero rows are left out of the index. Throws DataError when no rows
  /// remain or an entry is NaN.
  explicit FlatIndex(const EmbeddingMatrix& emb);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  std::size_t excluded_zero_rows() const { return excluded_; }
  const std::vector<std::string>& ids() const { return ids_; }

  /// Top-k for every row of `queries` (which must be unit norm). A k larger
  /// than the index returns the whole index ranked.
  std::vector<std::vector<Neighbor>> search(const RowMatrix<float>& queries, std::size_t k,
                                            std::size_t threads = 1) const;

 private:
  std::vector<std::string> ids_;
  RowMatrix<float> rows_;
  std::size_t excluded_ = 0;
};

FlatIndex build_index(const EmbeddingMatrix& emb);

/// Exact top-k for one query. Throws std::invalid_argument when k == 0 or
/// the query norm is not within 1e-5 of 1.
std::vector<Neighbor> knn_query(const FlatIndex& index,
                                const Eigen::Ref<const Eigen::VectorXf>& q, std::size_t k);

enum class SelectionMethod { kKnn, kRand };

std::string_view to_string(SelectionMethod m);
SelectionMethod parse_selection_method(std::string_view s);

struct QueryNeighbors {
  std::string query_id;
  std::vector<Neighbor> neighbors;
};

struct SelectionStats {
  std::size_t queries = 0;
  std::size_t unique_candidates = 0;
  std::size_t total_pairs = 0;
  std::size_t skipped_zero_queries = 0;
  std::size_t excluded_zero_candidates = 0;
};

struct SelectionResult {
  std::size_t k = 0;
  SelectionMethod method = SelectionMethod::kKnn;
  std::vector<QueryNeighbors> per_query;   // query order
  std::vector<std::string> selected_pool;  // first occurrence order
  SelectionStats stats;
};

/// Throws DataError when the two matrices come from different embedders.
/// Task rows that embed to zero are skipped and counted.
SelectionResult select_knn(const EmbeddingMatrix& task_emb, const EmbeddingMatrix& domain_emb,
                           std::size_t k, std::size_t threads = 1);

/// Per query, min(k, |pool|) uniform draws with replacement from `pool`,
/// then first-occurrence dedup into the selected pool. Neighbor scores are
/// reported as 0 since no similarity is computed.
SelectionResult select_random(std::span<const std::string> query_ids,
                              std::span<const std::string> pool, std::size_t k,
                              std::uint64_t seed);

enum class Provenance { kTask, kKnn, kRand, kCurated };

std::string_view to_string(Provenance p);

struct CorpusEntry {
  std::string id;
  std::string text;
  Provenance provenance = Provenance::kTask;
};

struct AugmentedCorpus {
  std::vector<CorpusEntry> entries;  // task, then candidates, then curated

  std::size_t count(Provenance p) const;
};

/// Task sentences first, then selected candidates, then curated extras,
/// exact-deduplicated on trimmed text with the earliest origin kept. Throws
/// DataError naming any pool id that `domain` cannot resolve.
AugmentedCorpus assemble_corpus(std::span<const SentenceRecord> task,
                                const SelectionResult* selection,
                                std::span<const SentenceRecord> domain,
                                std::span<const SentenceRecord> curated = {});

/// Each entry as a one-document corpus member for packing, with id
/// "<provenance>/<sentence id>" so task and domain ids cannot collide.
std::vector<Document> corpus_documents(const AugmentedCorpus& corpus);

std::string selection_to_jsonl(const SelectionResult& r);
SelectionResult selection_from_jsonl(const std::filesystem::path& path);
std::string pool_to_text(const SelectionResult& r);

/// Source sentence followed by its top `n` neighbors with scores.
std::string dump_neighbors(const SelectionResult& r,
                           const std::unordered_map<std::string, std::string>& texts,
                           std::size_t n);

}  // namespace dapt

#endif  // DAPT_SELECT_HPP_
