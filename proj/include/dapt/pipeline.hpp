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

#ifndef DAPT_PIPELINE_HPP_
#define DAPT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dapt/lmproxy.hpp"
#include "dapt/mask.hpp"
#include "dapt/plan.hpp"
#include "dapt/select.hpp"
#include "dapt/vocab.hpp"

namespace dapt {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline constexpr std::size_t kDefaultSelectK = 50;
inline constexpr std::size_t kDefaultDomainSampleSentences = 1000000;
inline constexpr double kDefaultHoldoutFraction = 0.1;

struct PipelineConfig {
  fs::path domain_corpus;               // documents.jsonl of the domain
  fs::path task_corpus;                 // documents.jsonl of the task
  std::vector<fs::path> other_corpora;  // extra domains for overlap and LM loss
  std::optional<fs::path> curated_corpus;
  fs::path out_dir = "out";

  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t max_len = kDefaultMaxLen;

  std::size_t vocab_k = kDefaultVocabK;
  std::size_t vocab_sample_docs = kDefaultVocabSampleDocs;
  std::optional<fs::path> stopwords;

  std::size_t domain_sample = kDefaultDomainSampleSentences;
  std::size_t dim = kDefaultEmbedDim;
  std::size_t max_vocab = kDefaultEmbedMaxVocab;

  SelectionMethod method = SelectionMethod::kKnn;
  std::size_t k = kDefaultSelectK;
  std::size_t dump_neighbors = 5;

  double mask_prob = kDefaultMaskProb;
  std::size_t epochs = kDefaultTaptEpochs;

  std::size_t ngram_order = kDefaultNgramOrder;
  double ngram_alpha = kDefaultNgramAlpha;
  double holdout_fraction = kDefaultHoldoutFraction;

  std::uint64_t dapt_steps = kDaptFixedSteps;
};

/// Reads keys matching the field names above; unknown keys are a
/// UsageError. Relative paths resolve against `base_dir`.
PipelineConfig config_from_json(const json& j, const fs::path& base_dir);

/// Documents from a JSONL file, validated.
std::vector<Document> load_documents(const fs::path& path);
/// Domain label: the first document's "domain", else the file stem.
std::string corpus_domain_name(const fs::path& path, const std::vector<Document>& docs);
StopwordSet load_stopwords(const std::optional<fs::path>& path);

// Each step writes its declared files atomically and returns a summary.

json step_ingest(const fs::path& documents, const fs::path& out_dir, std::size_t max_len,
                 std::uint64_t seed);

/// `sample_docs` of nullopt uses the whole corpus.
json step_vocab(const fs::path& documents, std::size_t k, std::optional<std::size_t> sample_docs,
                const StopwordSet& stopwords, std::uint64_t seed, const fs::path& out);

json step_overlap(const std::vector<fs::path>& corpora, std::size_t k,
                  std::optional<std::size_t> sample_docs, const StopwordSet& stopwords,
                  std::uint64_t seed, const fs::path& out,
                  const std::optional<std::string>& target);

/// Samples `sample` sentences (when fewer than available), then dedups.
json step_dedup(const fs::path& sentences, std::optional<std::size_t> sample,
                std::uint64_t seed, const fs::path& out);

/// Fits on the domain sentences; writes model.json, domain.emb, task.emb.
json step_embed(const fs::path& domain_sentences, const fs::path& task_sentences,
                const fs::path& out_dir, std::size_t dim, std::size_t max_vocab,
                std::uint64_t seed, std::size_t threads);

struct SelectInputs {
  fs::path task_emb;
  fs::path domain_emb;
  std::optional<fs::path> task_sentences;    // for neighbor dumps
  std::optional<fs::path> domain_sentences;  // for neighbor dumps
};

json step_select(const SelectInputs& in, SelectionMethod method, std::size_t k,
                 std::uint64_t seed, const fs::path& out_dir, std::size_t dump_count,
                 std::size_t threads);

json step_assemble(const fs::path& task_sentences, const fs::path& domain_sentences,
                   const std::optional<fs::path>& selection,
                   const std::optional<fs::path>& curated_documents, const fs::path& out);

json step_mask(const fs::path& sequences, std::size_t epochs, double p, std::uint64_t seed,
               const fs::path& out);

json step_lm_matrix(const std::vector<fs::path>& corpora, std::size_t order, double alpha,
                    double holdout_fraction, std::uint64_t seed, const fs::path& out);

/// Runs the whole chain into cfg.out_dir.
json run_pipeline(const PipelineConfig& cfg);

}  // namespace dapt

#endif  // DAPT_PIPELINE_HPP_
