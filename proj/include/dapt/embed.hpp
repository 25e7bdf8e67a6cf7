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

#ifndef DAPT_EMBED_HPP_
#define DAPT_EMBED_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "dapt/corpus.hpp"

namespace dapt {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-wise L2 normalization in place. Rows with zero norm stay zero.
template <typename Derived>
void normalize_rows(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto norm = m.row(i).norm();
    if (norm > 0) m.row(i) /= norm;
  }
}

/// Cosine similarity; 0 when either side is the zero vector.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (na == 0 || nb == 0) return 0.0;
  return a.template cast<double>().dot(b.template cast<double>()) / (na * nb);
}

inline constexpr std::size_t kDefaultEmbedDim = 256;
inline constexpr std::size_t kDefaultEmbedMaxVocab = 50000;

/// Bag-of-words embedder state: document-frequency vocabulary with IDF
/// weights and a |vocab| x dim signed projection.
struct EmbedderModel {
  std::vector<std::string> terms;  // df-descending, ties ascending
  std::vector<std::uint64_t> df;
  std::vector<double> idf;
  std::size_t num_sentences = 0;
  std::size_t dim = 0;
  RowMatrix<float> projection;
  std::string fitted_on;  // fingerprint of the training sentences
  std::uint64_t seed = 0;

  /// Hex digest over every field above, including the projection.
  std::string fingerprint() const;
  /// Vocabulary position of `term`, or -1.
  std::ptrdiff_t term_index(std::string_view term) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// Projection row for `term`: dim entries of +-1/sqrt(dim), one coin flip
/// each from Rng(splitmix64(seed ^ fnv1a64(term))).
Eigen::RowVectorXf projection_row(std::string_view term, std::size_t dim, std::uint64_t seed);

/// IDF = ln((1 + n) / (1 + df)) + 1.
double smoothed_idf(std::size_t num_sentences, std::uint64_t df);

/// Throws DataError on an empty sentence list, std::invalid_argument on
/// dim == 0 or max_vocab == 0.
EmbedderModel fit_embedder(std::span<const SentenceRecord> sentences, std::size_t dim,
                           std::size_t max_vocab, std::uint64_t seed);

/// Sentence embedder behind which a learned model could be substituted.
class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual std::size_t dim() const = 0;
  virtual std::string fingerprint() const = 0;
  /// Unit-norm vector, or the zero vector when nothing is in vocabulary.
  virtual Eigen::VectorXf embed(std::string_view text) const = 0;
};

class TfidfProjectionEmbedder final : public SentenceEmbedder {
 public:
  explicit TfidfProjectionEmbedder(const EmbedderModel& model)
      : model_(model), fingerprint_(model.fingerprint()) {}

  std::size_t dim() const override { return model_.dim; }
  std::string fingerprint() const override { return fingerprint_; }
  Eigen::VectorXf embed(std::string_view text) const override;

  /// TF-IDF weights over the model vocabulary (before projection).
  Eigen::VectorXd bag(std::string_view text) const;

 private:
  const EmbedderModel& model_;
  std::string fingerprint_;
};

struct EmbeddingMatrix {
  std::vector<std::string> ids;
  RowMatrix<float> vectors;
  std::string model_fingerprint;

  std::size_t rows() const { return ids.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  bool is_zero_row(std::size_t i) const;
  std::vector<std::size_t> zero_rows() const;
};

EmbeddingMatrix embed_batch(const SentenceEmbedder& embedder,
                            std::span<const SentenceRecord> sentences,
                            std::size_t threads = 1);
EmbeddingMatrix embed_batch(const EmbedderModel& model,
                            std::span<const SentenceRecord> sentences,
                            std::size_t threads = 1);

/// Fingerprint of a sentence list (ids and texts, in order).
std::string corpus_fingerprint(std::span<const SentenceRecord> sentences);

/// Binary "EMB1" file: magic, u32 rows, u32 dim, row-major float32, all
/// little-endian. Writes `<path>.ids` (one id per line) and
/// `<path>.meta.json` (model fingerprint) alongside.
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);
EmbeddingMatrix read_embeddings(const std::filesystem::path& path);

/// Model without the projection, which is regenerated from (term, seed).
nlohmann::ordered_json model_to_json(const EmbedderModel& model);
EmbedderModel model_from_json(const nlohmann::ordered_json& j);

}  // namespace dapt

#endif  // DAPT_EMBED_HPP_
