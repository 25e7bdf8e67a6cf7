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

#include "dapt/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "dapt/rng.hpp"
#include "dapt/text.hpp"
#include "stopwords_data.hpp"

namespace dapt {

const StopwordSet& default_stopwords() {
  static const StopwordSet words = parse_stopwords(detail::kStopwordsText);
  return words;
}

std::string default_stopwords_checksum() {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(detail::kStopwordsText)));
  return buf;
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    std::string word(line);
    for (char& c : word)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
    out.insert(std::move(word));
  }
  return out;
}

void TermCounts::add_text(std::string_view text, const StopwordSet& stopwords) {
  for (auto& tok : tokenize(text, TokenizeMode::kAnalysis)) {
    if (stopwords.contains(tok)) continue;
    ++counts_[std::move(tok)];
  }
}

void TermCounts::merge(const TermCounts& other) {
  for (const auto& [term, n] : other.counts_) counts_[term] += n;
}

DomainVocabulary vocabulary_from_counts(const TermCounts& counts, std::size_t k) {
  if (k == 0) throw std::invalid_argument("build_vocabulary: k must be >= 1");
  DomainVocabulary v;
  v.k = k;
  v.terms.reserve(counts.counts().size());
  for (const auto& [term, n] : counts.counts()) v.terms.push_back({term, n});
  const auto by_rank = [](const VocabEntry& a, const VocabEntry& b) {
    return a.count != b.count ? a.count > b.count : a.term < b.term;
  };
  const std::size_t keep = std::min(k, v.terms.size());
  std::partial_sort(v.terms.begin(), v.terms.begin() + static_cast<std::ptrdiff_t>(keep),
                    v.terms.end(), by_rank);
  v.terms.resize(keep);
  return v;
}

DomainVocabulary build_vocabulary(std::span<const Document> sample, std::size_t k,
                                  const StopwordSet& stopwords) {
  TermCounts counts;
  for (const auto& doc : sample) counts.add_text(doc.text, stopwords);
  DomainVocabulary v = vocabulary_from_counts(counts, k);
  v.sample_docs = sample.size();
  if (!sample.empty()) v.domain = sample.front().domain;
  return v;
}

double overlap(const DomainVocabulary& a, const DomainVocabulary& b) {
  if (a.k != b.k)
    throw std::invalid_argument("overlap: vocabulary sizes differ (k=" +
                                std::to_string(a.k) + " vs k=" + std::to_string(b.k) + ")");
  const std::size_t denom = std::max(a.size(), b.size());
  if (denom == 0) return 100.0;
  std::unordered_set<std::string_view> terms;
  for (const auto& e : a.terms) terms.insert(e.term);
  std::size_t shared = 0;
  for (const auto& e : b.terms) shared += terms.contains(e.term);
  return 100.0 * static_cast<double>(shared) / static_cast<double>(denom);
}

OverlapMatrix overlap_matrix(std::span<const DomainVocabulary> vocabs) {
  if (vocabs.size() < 2)
    throw std::invalid_argument("overlap_matrix: need at least two vocabularies");
  const auto n = static_cast<Eigen::Index>(vocabs.size());
  OverlapMatrix m;
  m.pct.resize(n, n);
  for (const auto& v : vocabs) m.domains.push_back(v.domain);
  for (Eigen::Index i = 0; i < n; ++i) {
    m.pct(i, i) = overlap(vocabs[i], vocabs[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m.pct(i, j) = overlap(vocabs[i], vocabs[j]);
      m.pct(j, i) = m.pct(i, j);
    }
  }
  return m;
}

std::string pick_irrelevant_domain(const OverlapMatrix& m, std::string_view target) {
  if (m.domains.size() < 2)
    throw std::invalid_argument("pick_irrelevant_domain: need at least two domains");
  const auto it = std::find(m.domains.begin(), m.domains.end(), target);
  if (it == m.domains.end())
    throw std::invalid_argument("pick_irrelevant_domain: unknown domain " +
                                std::string(target));
  const auto row = static_cast<Eigen::Index>(it - m.domains.begin());
  Eigen::Index best = -1;
  for (Eigen::Index j = 0; j < m.pct.cols(); ++j) {
    if (j == row || m.domains[j] == target) continue;
    if (best < 0 || m.pct(row, j) < m.pct(row, best) ||
        (m.pct(row, j) == m.pct(row, best) && m.domains[j] < m.domains[best]))
      best = j;
  }
  if (best < 0)
    throw std::invalid_argument("pick_irrelevant_domain: no domain other than target");
  return m.domains[best];
}

std::string vocabulary_to_tsv(const DomainVocabulary& v) {
  std::string out;
  for (const auto& e : v.terms) {
    out += e.term;
    out += '\t';
    out += std::to_string(e.count);
    out += '\n';
  }
  return out;
}

std::string overlap_to_tsv(const OverlapMatrix& m) {
  std::string out = "domain";
  for (const auto& d : m.domains) out += "\t" + d;
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.pct.rows(); ++i) {
    out += m.domains[i];
    for (Eigen::Index j = 0; j < m.pct.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "\t%.1f", m.pct(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dapt
