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

#include "dapt/lmproxy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dapt/errors.hpp"
#include "dapt/rng.hpp"
#include "dapt/text.hpp"

namespace dapt {

namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

std::string NgramLM::context_key(std::span<const std::string> context) {
  std::string key;
  for (const auto& s : context) {
    key += s;
    key += '\x1f';
  }
  return key;
}

std::vector<std::string> NgramLM::padded(std::string_view text, bool map_unk) const {
  std::vector<std::string> seq(order_ - 1, std::string(kBos));
  for (auto& tok : tokenize(text, TokenizeMode::kAnalysis)) {
    if (map_unk && !vocab_.contains(tok)) {
      seq.emplace_back(kUnk);
    } else {
      seq.push_back(std::move(tok));
    }
  }
  for (std::size_t i = 0; i + 1 < order_; ++i) seq.emplace_back(kEos);
  return seq;
}

NgramLM NgramLM::train(std::span<const Document> corpus, std::size_t order, double alpha,
                       std::string domain) {
  if (corpus.empty()) throw DataError("train_ngram: empty corpus");
  if (order == 0) throw std::invalid_argument("train_ngram: order must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("train_ngram: alpha must be > 0");
  NgramLM lm;
  lm.order_ = order;
  lm.alpha_ = alpha;
  lm.domain_ = std::move(domain);
  for (const auto& doc : corpus) {
    const auto seq = lm.padded(doc.text, false);
    for (std::size_t i = order - 1; i < seq.size(); ++i) {
      const std::span<const std::string> ctx(seq.data() + i - (order - 1), order - 1);
      auto& cc = lm.counts_[context_key(ctx)];
      ++cc.total;
      ++cc.next[seq[i]];
      lm.vocab_.insert(seq[i]);
    }
  }
  return lm;
}

NgramLM NgramLM::untrained(std::set<std::string> vocab, std::size_t order, double alpha) {
  if (order == 0) throw std::invalid_argument("train_ngram: order must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("train_ngram: alpha must be > 0");
  NgramLM lm;
  lm.order_ = order;
  lm.alpha_ = alpha;
  lm.vocab_ = std::move(vocab);
  return lm;
}

double NgramLM::prob(std::span<const std::string> context, std::string_view word) const {
  const double classes = static_cast<double>(vocab_.size() + 1);
  std::uint64_t c_ctx = 0;
  std::uint64_t c_word = 0;
  const auto it = counts_.find(context_key(context));
  if (it != counts_.end()) {
    c_ctx = it->second.total;
    const std::string key = vocab_.contains(std::string(word)) ? std::string(word)
                                                                : std::string(kUnk);
    const auto w = it->second.next.find(key);
    if (w != it->second.next.end()) c_word = w->second;
  }
  return (static_cast<double>(c_word) + alpha_) /
         (static_cast<double>(c_ctx) + alpha_ * classes);
}

double NgramLM::context_mass(std::span<const std::string> context) const {
  double total = prob(context, kUnk);
  for (const auto& w : vocab_) total += prob(context, w);
  return total;
}

std::pair<double, std::size_t> NgramLM::sequence_nll(std::string_view text) const {
  const auto seq = padded(text, true);
  double nll = 0.0;
  std::size_t n = 0;
  for (std::size_t i = order_ - 1; i < seq.size(); ++i) {
    const std::span<const std::string> ctx(seq.data() + i - (order_ - 1), order_ - 1);
    nll -= std::log(prob(ctx, seq[i]));
    ++n;
  }
  return {nll, n};
}

bool operator==(const NgramLM& a, const NgramLM& b) {
  return a.order_ == b.order_ && a.alpha_ == b.alpha_ && a.domain_ == b.domain_ &&
         a.vocab_ == b.vocab_ && a.counts_ == b.counts_;
}

double eval_loss(const NgramLM& lm, std::span<const Document> heldout) {
  if (heldout.empty()) throw DataError("eval_loss: empty held-out set");
  std::vector<double> sums;
  sums.reserve(heldout.size());
  std::size_t tokens = 0;
  for (const auto& doc : heldout) {
    const auto [nll, n] = lm.sequence_nll(doc.text);
    sums.push_back(nll);
    tokens += n;
  }
  if (tokens == 0) throw DataError("eval_loss: held-out set has no scorable tokens");
  std::sort(sums.begin(), sums.end());
  return pairwise_sum(sums) / static_cast<double>(tokens);
}

LossMatrix cross_domain_matrix(std::span<const DomainCorpus> domains, std::size_t order,
                               double alpha, double holdout_fraction, std::uint64_t seed) {
  if (domains.size() < 2)
    throw std::invalid_argument("cross_domain_matrix: need at least two domains");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("cross_domain_matrix: holdout fraction must be in (0, 1)");

  const std::uint64_t split_seed = derive_seed(seed, "lmproxy.split");
  std::vector<NgramLM> models;
  std::vector<std::vector<Document>> heldout(domains.size());
  for (std::size_t d = 0; d < domains.size(); ++d) {
    const auto& docs = domains[d].docs;
    const auto n = docs.size();
    const auto held = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n))));
    if (n < 2 || held >= n)
      throw DataError("cross_domain_matrix: domain " + domains[d].name + " has " +
                      std::to_string(n) + " documents, too few to split");
    std::vector<bool> is_held(n, false);
    for (std::size_t i : sample_indices(n, held, split_seed)) is_held[i] = true;
    std::vector<Document> train;
    for (std::size_t i = 0; i < n; ++i) (is_held[i] ? heldout[d] : train).push_back(docs[i]);
    models.push_back(NgramLM::train(train, order, alpha, domains[d].name));
  }

  LossMatrix m;
  const auto n = static_cast<Eigen::Index>(domains.size());
  m.loss.resize(n, n);
  for (const auto& d : domains) {
    m.model_domains.push_back(d.name);
    m.eval_domains.push_back(d.name);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m.loss(i, j) = eval_loss(models[static_cast<std::size_t>(i)],
                               heldout[static_cast<std::size_t>(j)]);
  return m;
}

std::string loss_matrix_to_tsv(const LossMatrix& m) {
  std::string out = "model\\eval";
  for (const auto& d : m.eval_domains) out += "\t" + d;
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.loss.rows(); ++i) {
    out += m.model_domains[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.loss.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "\t%.4f", m.loss(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const LossMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.loss.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < m.loss.cols(); ++j) row.push_back(m.loss(i, j));
    rows.push_back(row);
  }
  return nlohmann::ordered_json{{"model_domains", m.model_domains},
                        {"eval_domains", m.eval_domains},
                        {"loss", rows},
                        {"unit", "nats/token"}};
}

}  // namespace dapt
