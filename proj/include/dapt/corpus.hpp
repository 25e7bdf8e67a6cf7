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

#ifndef DAPT_CORPUS_HPP_
#define DAPT_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dapt {

struct Document {
  std::string id;
  std::string domain;
  std::string text;

  friend bool operator==(const Document&, const Document&) = default;
};

struct SentenceRecord {
  std::string sent_id;  // doc_id + "#" + idx
  std::string doc_id;
  std::size_t idx = 0;
  std::string text;
  std::size_t token_count = 0;  // whitespace tokens

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

struct PackedSequence {
  std::string seq_id;
  std::string doc_id;
  std::vector<std::string> tokens;

  friend bool operator==(const PackedSequence&, const PackedSequence&) = default;
};

inline constexpr std::size_t kDefaultMaxLen = 512;
inline constexpr std::string_view kMaskToken = "<mask>";

/// Throws DataError on an empty or duplicate id, or text that is empty
/// after trimming or not valid UTF-8.
void validate_documents(std::span<const Document> docs);

/// Rule-based splitter: a sentence ends at a run of . ? ! (plus closing
/// quotes/brackets) followed by whitespace and an uppercase letter or an
/// opening quote. A period after a known abbreviation or a single-letter
/// initial does not end a sentence.
std::vector<SentenceRecord> split_sentences(const Document& doc);

/// Splits every document, keeping corpus order.
std::vector<SentenceRecord> split_corpus(std::span<const Document> docs);

/// Escapes tokens that would collide with the mask sentinel: any token of
/// the form \*<mask> gains one more leading backslash.
std::string escape_mask_token(std::string_view token);
std::string unescape_mask_token(std::string_view token);

/// Greedy packing of contiguous sentences into sequences of at most
/// `max_len` whitespace tokens. Sequences never span documents. A single
/// sentence longer than `max_len` becomes its own sequence, truncated at
/// the beginning or the end by one coin flip from the document's stream
/// (seeded from `seed` and the document id).
std::vector<PackedSequence> pack_sequences(std::span<const Document> docs,
                                           std::size_t max_len,
                                           std::uint64_t seed);

/// Exact-text dedup (compared after trimming); first occurrence wins.
std::vector<SentenceRecord> dedup_sentences(std::span<const SentenceRecord> records);

/// `n` distinct indices from [0, size) chosen by a partial Fisher-Yates
/// shuffle on Rng(seed), returned in ascending order.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n,
                                        std::uint64_t seed);

/// Uniform sample without replacement, in ascending corpus order. Throws
/// DataError when `n` exceeds the corpus size.
std::vector<Document> sample_documents(std::span<const Document> corpus,
                                       std::size_t n, std::uint64_t seed);

}  // namespace dapt

#endif  // DAPT_CORPUS_HPP_
