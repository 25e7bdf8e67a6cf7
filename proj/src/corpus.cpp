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

#include "dapt/corpus.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_set>

#include "dapt/errors.hpp"
#include "dapt/rng.hpp"
#include "dapt/text.hpp"

namespace dapt {

namespace {

// Lowercased, without the trailing period.
constexpr std::array<std::string_view, 44> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",   "prof", "sr",   "jr",   "st",   "mt",
    "vs",   "etc",  "e.g",  "i.e",  "cf",   "fig",  "figs", "al",   "vol",
    "approx", "dept", "inc", "ltd", "co",   "corp", "est",  "jan",  "feb",
    "apr",  "jun",  "jul",  "aug",  "sep",  "sept", "oct",  "nov",  "dec",
    "gen",  "gov",  "sen",  "rep",  "eq",   "ref",  "u.s",  "ph.d"};

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0x2019 ||
         cp == 0x201d;
}

bool is_sentence_opener(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return true;
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201c ||
         cp == 0x2018;
}

bool is_abbreviation(std::string_view text, std::size_t period_pos) {
  std::size_t begin = period_pos;
  while (begin > 0) {
    const char c = text[begin - 1];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
    --begin;
  }
  std::string word;
  bool initial = false;
  for (std::size_t i = begin; i < period_pos; ++i) {
    const char c = text[i];
    if (word.empty() && (c == '(' || c == '[' || c == '"' || c == '\'')) continue;
    if (word.empty()) initial = c >= 'A' && c <= 'Z';
    word.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + 0x20 : c));
  }
  // A lone capital is an initial ("J. R. Tolkien"); a lone lowercase word is not.
  if (word.size() == 1 && initial) return true;
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

}  // namespace

void validate_documents(std::span<const Document> docs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : docs) {
    if (doc.id.empty()) throw DataError("document has an empty id");
    if (!seen.insert(doc.id).second)
      throw DataError("duplicate document id: " + doc.id);
    if (!is_valid_utf8(doc.text))
      throw DataError("document " + doc.id + ": text is not valid UTF-8");
    if (trim(doc.text).empty())
      throw DataError("document " + doc.id + ": text is empty");
  }
}

std::vector<SentenceRecord> split_sentences(const Document& doc) {
  const std::string_view text = doc.text;
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!is_terminator(text[pos])) {
      ++pos;
      continue;
    }
    const std::size_t term_begin = pos;
    while (pos < text.size() && is_terminator(text[pos])) ++pos;
    const std::size_t term_len = pos - term_begin;
    while (pos < text.size()) {
      std::size_t len = 0;
      if (!is_closer(decode_utf8(text, pos, len))) break;
      pos += len;
    }
    const std::size_t sentence_end = pos;
    std::size_t next = pos;
    bool saw_space = false;
    while (next < text.size()) {
      std::size_t len = 0;
      if (!is_unicode_space(decode_utf8(text, next, len))) break;
      saw_space = true;
      next += len;
    }
    if (next < text.size()) {
      if (!saw_space) continue;
      std::size_t len = 0;
      if (!is_sentence_opener(decode_utf8(text, next, len))) continue;
      if (term_len == 1 && text[term_begin] == '.' &&
          is_abbreviation(text, term_begin))
        continue;
    }
    pieces.push_back(text.substr(start, sentence_end - start));
    start = next;
    pos = next;
  }
  if (start < text.size()) pieces.push_back(text.substr(start));

  std::vector<SentenceRecord> out;
  for (std::string_view piece : pieces) {
    const std::string_view s = trim(piece);
    if (s.empty()) continue;
    SentenceRecord rec;
    rec.idx = out.size();
    rec.doc_id = doc.id;
    rec.sent_id = doc.id + "#" + std::to_string(rec.idx);
    rec.text = std::string(s);
    rec.token_count = tokenize(rec.text, TokenizeMode::kSequence).size();
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SentenceRecord> split_corpus(std::span<const Document> docs) {
  std::vector<SentenceRecord> out;
  for (const auto& doc : docs) {
    auto sents = split_sentences(doc);
    out.insert(out.end(), std::make_move_iterator(sents.begin()),
               std::make_move_iterator(sents.end()));
  }
  return out;
}

namespace {

bool is_escaped_mask_form(std::string_view token) {
  const std::size_t slashes = token.find_first_not_of('\\');
  if (slashes == std::string_view::npos) return false;
  return token.substr(slashes) == kMaskToken;
}

}  // namespace

std::string escape_mask_token(std::string_view token) {
  if (is_escaped_mask_form(token)) return "\\" + std::string(token);
  return std::string(token);
}

std::string unescape_mask_token(std::string_view token) {
  if (!token.empty() && token[0] == '\\' && is_escaped_mask_form(token))
    return std::string(token.substr(1));
  return std::string(token);
}

std::vector<PackedSequence> pack_sequences(std::span<const Document> docs,
                                           std::size_t max_len,
                                           std::uint64_t seed) {
  if (max_len == 0) throw std::invalid_argument("pack_sequences: max_len must be >= 1");
  std::vector<PackedSequence> out;
  for (const auto& doc : docs) {
    Rng rng(splitmix64(seed ^ fnv1a64(doc.id)));
    std::size_t n = 0;
    std::vector<std::string> current;
    auto emit = [&](std::vector<std::string> tokens) {
      out.push_back({doc.id + ":" + std::to_string(n++), doc.id, std::move(tokens)});
    };
    for (const auto& sent : split_sentences(doc)) {
      std::vector<std::string> toks;
      for (auto& t : tokenize(sent.text, TokenizeMode::kSequence))
        toks.push_back(escape_mask_token(t));
      if (toks.size() > max_len) {
        if (!current.empty()) emit(std::exchange(current, {}));
        const std::size_t drop = toks.size() - max_len;
        if (rng.coin()) {
          toks.erase(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(drop));
        } else {
          toks.resize(max_len);
        }
        emit(std::move(toks));
        continue;
      }
      if (current.size() + toks.size() > max_len) emit(std::exchange(current, {}));
      current.insert(current.end(), std::make_move_iterator(toks.begin()),
                     std::make_move_iterator(toks.end()));
    }
    if (!current.empty()) emit(std::move(current));
  }
  return out;
}

std::vector<SentenceRecord> dedup_sentences(std::span<const SentenceRecord> records) {
  std::unordered_set<std::string_view> seen;
  std::vector<SentenceRecord> out;
  for (const auto& rec : records) {
    if (seen.insert(trim(rec.text)).second) out.push_back(rec);
  }
  return out;
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n,
                                        std::uint64_t seed) {
  if (n > size)
    throw DataError("sample size " + std::to_string(n) + " exceeds corpus size " +
                    std::to_string(size));
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(n);
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::vector<Document> sample_documents(std::span<const Document> corpus,
                                       std::size_t n, std::uint64_t seed) {
  std::vector<Document> out;
  out.reserve(n);
  for (std::size_t i : sample_indices(corpus.size(), n, seed)) out.push_back(corpus[i]);
  return out;
}

}  // namespace dapt
