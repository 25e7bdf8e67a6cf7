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

#ifndef DAPT_LMPROXY_HPP_
#define DAPT_LMPROXY_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "dapt/corpus.hpp"

namespace dapt {

inline constexpr std::size_t kDefaultNgramOrder = 3;
inline constexpr double kDefaultNgramAlpha = 0.1;

/// Additive-smoothed n-gram model over analysis-mode tokens. Each document
/// is one sequence, padded with order-1 "<s>" on the left and order-1
/// "</s>" on the right; the right padding is predicted, the left is
/// context only. OOV words map to a single UNK class, so
///
///   P(w | ctx) = (c(ctx, w) + alpha) / (c(ctx) + alpha * (V + 1))
///
/// with V the number of distinct predicted training symbols.
class NgramLM {
 public:
  /// Throws DataError on an empty corpus, std::invalid_argument on
  /// order == 0 or alpha <= 0.
  static NgramLM train(std::span<const Document> corpus, std::size_t order, double alpha,
                       std::string domain = {});
  /// A model with a vocabulary and no counts: uniform over V + 1 classes.
  static NgramLM untrained(std::set<std::string> vocab, std::size_t order, double alpha);

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::string& domain() const { return domain_; }
  const std::set<std::string>& vocab() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }

  /// `context` holds the order-1 preceding symbols (already UNK-mapped
  /// or padding).
  double prob(std::span<const std::string> context, std::string_view word) const;
  /// Sum of prob over vocab + UNK for a context. 1 up to rounding.
  double context_mass(std::span<const std::string> context) const;

  /// Sum of -ln P over the predicted symbols of one document, and how many
  /// there were.
  std::pair<double, std::size_t> sequence_nll(std::string_view text) const;

  friend bool operator==(const NgramLM& a, const NgramLM& b);

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> next;
    friend bool operator==(const ContextCounts&, const ContextCounts&) = default;
  };

  std::vector<std::string> padded(std::string_view text, bool map_unk) const;
  static std::string context_key(std::span<const std::string> context);

  std::size_t order_ = 1;
  double alpha_ = kDefaultNgramAlpha;
  std::string domain_;
  std::set<std::string> vocab_;
  std::map<std::string, ContextCounts> counts_;
};

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

/// Mean negative log-likelihood per predicted symbol (nats). Per-document
/// sums are combined by sorted pairwise summation, so document order does
/// not change the result. Throws DataError when there is nothing to score.
double eval_loss(const NgramLM& lm, std::span<const Document> heldout);

struct DomainCorpus {
  std::string name;
  std::vector<Document> docs;
};

struct LossMatrix {
  std::vector<std::string> model_domains;
  std::vector<std::string> eval_domains;
  Eigen::MatrixXd loss;  // nats per token
};

/// Splits every domain with the same seeded stream (so identical corpora
/// split identically), trains one model per domain on its training part,
/// and scores every model on every held-out part.
LossMatrix cross_domain_matrix(std::span<const DomainCorpus> domains, std::size_t order,
                               double alpha, double holdout_fraction, std::uint64_t seed);

std::string loss_matrix_to_tsv(const LossMatrix& m);
nlohmann::ordered_json to_json(const LossMatrix& m);

}  // namespace dapt

#endif  // DAPT_LMPROXY_HPP_
