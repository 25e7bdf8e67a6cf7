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

#ifndef DAPT_VOCAB_HPP_
#define DAPT_VOCAB_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "dapt/corpus.hpp"

namespace dapt {

using StopwordSet = std::unordered_set<std::string>;

inline constexpr std::size_t kDefaultVocabK = 10000;
inline constexpr std::size_t kDefaultVocabSampleDocs = 50000;
inline constexpr std::size_t kDefaultShortDocVocabSampleDocs = 150000;

/// The shipped English list (data/stopwords_en.txt).
const StopwordSet& default_stopwords();
/// FNV-1a 64 of the shipped list's raw bytes, as 16 lowercase hex digits.
std::string default_stopwords_checksum();
/// One word per line; blank lines and lines starting with '#' ignored.
StopwordSet parse_stopwords(std::string_view text);

/// Unigram frequency counts. Merging is associative and commutative, so
/// shards can be counted independently.
class TermCounts {
 public:
  void add_text(std::string_view text, const StopwordSet& stopwords);
  void merge(const TermCounts& other);
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

 private:
  std::map<std::string, std::uint64_t> counts_;
};

struct VocabEntry {
  std::string term;
  std::uint64_t count = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

struct DomainVocabulary {
  std::string domain;
  std::size_t k = 0;
  std::vector<VocabEntry> terms;  // frequency-descending, ties ascending
  std::size_t sample_docs = 0;

  std::size_t size() const { return terms.size(); }
};

/// Top-k analysis-mode unigrams by frequency; ties at the cut broken by
/// ascending term. Returns fewer than k terms when the sample is small.
DomainVocabulary build_vocabulary(std::span<const Document> sample, std::size_t k,
                                  const StopwordSet& stopwords);
DomainVocabulary vocabulary_from_counts(const TermCounts& counts, std::size_t k);

/// 100 * |a ∩ b| / max(|a|, |b|); equals 100 * |a ∩ b| / k for full
/// vocabularies. Throws std::invalid_argument when a.k != b.k.
double overlap(const DomainVocabulary& a, const DomainVocabulary& b);

struct OverlapMatrix {
  std::vector<std::string> domains;
  Eigen::MatrixXd pct;
};

OverlapMatrix overlap_matrix(std::span<const DomainVocabulary> vocabs);

/// Domain (other than `target`) with the smallest overlap against it; ties
/// go to the lexicographically smaller name.
std::string pick_irrelevant_domain(const OverlapMatrix& m, std::string_view target);

/// "term\tcount" per line.
std::string vocabulary_to_tsv(const DomainVocabulary& v);
/// Header row and first column carry domain names; one decimal place.
std::string overlap_to_tsv(const OverlapMatrix& m);

}  // namespace dapt

#endif  // DAPT_VOCAB_HPP_
