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

#include "dapt/pipeline.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "dapt/embed.hpp"
#include "dapt/errors.hpp"
#include "dapt/jsonl.hpp"
#include "dapt/rng.hpp"

namespace dapt {

namespace {

std::string name_of(const fs::path& p) { return p.filename().string(); }

std::vector<SentenceRecord> load_sentences(const fs::path& path) {
  auto sents = io::read_sentences(path);
  std::set<std::string_view> ids;
  for (const auto& s : sents)
    if (!ids.insert(s.sent_id).second)
      throw DataError(path.string() + ": duplicate sent_id " + s.sent_id);
  return sents;
}

std::unordered_map<std::string, std::string> text_map(const std::vector<SentenceRecord>& s) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& r : s) out.emplace(r.sent_id, r.text);
  return out;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: field \"") + key + "\" has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

PipelineConfig config_from_json(const json& j, const fs::path& base_dir) {
  static const std::set<std::string> kKnown = {
      "domain_corpus", "task_corpus",  "other_corpora",  "curated_corpus",   "out_dir",
      "seed",          "threads",      "max_len",        "vocab_k",          "vocab_sample_docs",
      "stopwords",     "domain_sample", "dim",           "max_vocab",        "method",
      "k",             "dump_neighbors", "mask_prob",    "epochs",           "ngram_order",
      "ngram_alpha",   "holdout_fraction", "dapt_steps"};
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKnown.contains(key)) throw UsageError("config: unknown field \"" + key + "\"");

  PipelineConfig c;
  std::string s;
  if (j.contains("domain_corpus")) {
    read_field(j, "domain_corpus", s);
    c.domain_corpus = resolve(base_dir, s);
  }
  if (j.contains("task_corpus")) {
    read_field(j, "task_corpus", s);
    c.task_corpus = resolve(base_dir, s);
  }
  if (j.contains("curated_corpus")) {
    read_field(j, "curated_corpus", s);
    c.curated_corpus = resolve(base_dir, s);
  }
  if (j.contains("stopwords")) {
    read_field(j, "stopwords", s);
    c.stopwords = resolve(base_dir, s);
  }
  if (j.contains("out_dir")) {
    read_field(j, "out_dir", s);
    c.out_dir = resolve(base_dir, s);
  }
  std::vector<std::string> others;
  read_field(j, "other_corpora", others);
  for (const auto& o : others) c.other_corpora.push_back(resolve(base_dir, o));
  if (j.contains("method")) {
    read_field(j, "method", s);
    try {
      c.method = parse_selection_method(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  read_field(j, "seed", c.seed);
  read_field(j, "threads", c.threads);
  read_field(j, "max_len", c.max_len);
  read_field(j, "vocab_k", c.vocab_k);
  read_field(j, "vocab_sample_docs", c.vocab_sample_docs);
  read_field(j, "domain_sample", c.domain_sample);
  read_field(j, "dim", c.dim);
  read_field(j, "max_vocab", c.max_vocab);
  read_field(j, "k", c.k);
  read_field(j, "dump_neighbors", c.dump_neighbors);
  read_field(j, "mask_prob", c.mask_prob);
  read_field(j, "epochs", c.epochs);
  read_field(j, "ngram_order", c.ngram_order);
  read_field(j, "ngram_alpha", c.ngram_alpha);
  read_field(j, "holdout_fraction", c.holdout_fraction);
  read_field(j, "dapt_steps", c.dapt_steps);
  return c;
}

std::vector<Document> load_documents(const fs::path& path) {
  auto docs = io::read_documents(path);
  try {
    validate_documents(docs);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return docs;
}

std::string corpus_domain_name(const fs::path& path, const std::vector<Document>& docs) {
  if (!docs.empty() && !docs.front().domain.empty()) return docs.front().domain;
  return path.stem().string();
}

StopwordSet load_stopwords(const std::optional<fs::path>& path) {
  if (!path) return default_stopwords();
  return parse_stopwords(io::read_text(*path));
}

json step_ingest(const fs::path& documents, const fs::path& out_dir, std::size_t max_len,
                 std::uint64_t seed) {
  const auto docs = load_documents(documents);
  const auto sentences = split_corpus(docs);
  const auto sequences = pack_sequences(docs, max_len, derive_seed(seed, "corpus.pack"));
  io::write_jsonl<SentenceRecord>(out_dir / "sentences.jsonl", sentences);
  io::write_jsonl<PackedSequence>(out_dir / "sequences.jsonl", sequences);
  return json{{"command", "ingest"},
              {"input", name_of(documents)},
              {"documents", docs.size()},
              {"sentences", sentences.size()},
              {"sequences", sequences.size()},
              {"max_len", max_len},
              {"outputs", {"sentences.jsonl", "sequences.jsonl"}}};
}

namespace {

DomainVocabulary vocab_for(const fs::path& path, std::size_t k,
                           std::optional<std::size_t> sample_docs,
                           const StopwordSet& stopwords, std::uint64_t seed) {
  const auto docs = load_documents(path);
  const std::string domain = corpus_domain_name(path, docs);
  std::vector<Document> sample =
      sample_docs ? sample_documents(docs, *sample_docs, derive_seed(seed, "vocab.sample:" + domain))
                  : docs;
  DomainVocabulary v = build_vocabulary(sample, k, stopwords);
  v.domain = domain;
  return v;
}

}  // namespace

json step_vocab(const fs::path& documents, std::size_t k, std::optional<std::size_t> sample_docs,
                const StopwordSet& stopwords, std::uint64_t seed, const fs::path& out) {
  const auto v = vocab_for(documents, k, sample_docs, stopwords, seed);
  io::write_text_atomic(out, vocabulary_to_tsv(v));
  return json{{"command", "vocab"},    {"domain", v.domain},       {"k", v.k},
              {"terms", v.size()},     {"sample_docs", v.sample_docs},
              {"output", name_of(out)}};
}

json step_overlap(const std::vector<fs::path>& corpora, std::size_t k,
                  std::optional<std::size_t> sample_docs, const StopwordSet& stopwords,
                  std::uint64_t seed, const fs::path& out,
                  const std::optional<std::string>& target) {
  if (corpora.size() < 2) throw UsageError("overlap: need at least two corpora");
  std::vector<DomainVocabulary> vocabs;
  std::set<std::string> names;
  for (const auto& c : corpora) {
    vocabs.push_back(vocab_for(c, k, sample_docs, stopwords, seed));
    if (!names.insert(vocabs.back().domain).second)
      throw DataError("overlap: two corpora share the domain name " + vocabs.back().domain);
  }
  const auto m = overlap_matrix(vocabs);
  io::write_text_atomic(out, overlap_to_tsv(m));
  json summary{{"command", "overlap"},    {"domains", m.domains}, {"k", k},
               {"output", name_of(out)}};
  json sizes = json::object();
  for (const auto& v : vocabs) sizes[v.domain] = v.size();
  summary["vocab_sizes"] = sizes;
  if (target) {
    try {
      summary["irrelevant_domain"] = pick_irrelevant_domain(m, *target);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("overlap: ") + e.what());
    }
    summary["target"] = *target;
  }
  return summary;
}

json step_dedup(const fs::path& sentences, std::optional<std::size_t> sample,
                std::uint64_t seed, const fs::path& out) {
  const auto all = load_sentences(sentences);
  std::vector<SentenceRecord> sampled;
  if (sample && *sample < all.size()) {
    for (std::size_t i :
         sample_indices(all.size(), *sample, derive_seed(seed, "corpus.sentence_sample")))
      sampled.push_back(all[i]);
  } else {
    sampled = all;
  }
  const auto unique = dedup_sentences(sampled);
  io::write_jsonl<SentenceRecord>(out, unique);
  return json{{"command", "dedup"},           {"input_sentences", all.size()},
              {"sampled", sampled.size()},    {"deduplicated", unique.size()},
              {"output", name_of(out)}};
}

json step_embed(const fs::path& domain_sentences, const fs::path& task_sentences,
                const fs::path& out_dir, std::size_t dim, std::size_t max_vocab,
                std::uint64_t seed, std::size_t threads) {
  const auto domain = load_sentences(domain_sentences);
  const auto task = load_sentences(task_sentences);
  const EmbedderModel model =
      fit_embedder(domain, dim, max_vocab, derive_seed(seed, "embed.projection"));
  const auto domain_emb = embed_batch(model, domain, threads);
  const auto task_emb = embed_batch(model, task, threads);
  io::write_text_atomic(out_dir / "model.json", model_to_json(model).dump() + "\n");
  write_embeddings(out_dir / "domain.emb", domain_emb);
  write_embeddings(out_dir / "task.emb", task_emb);
  return json{{"command", "embed"},
              {"model_fingerprint", model.fingerprint()},
              {"vocab", model.terms.size()},
              {"dim", dim},
              {"domain_rows", domain_emb.rows()},
              {"domain_zero_rows", domain_emb.zero_rows().size()},
              {"task_rows", task_emb.rows()},
              {"task_zero_rows", task_emb.zero_rows().size()},
              {"outputs", {"model.json", "domain.emb", "task.emb"}}};
}

json step_select(const SelectInputs& in, SelectionMethod method, std::size_t k,
                 std::uint64_t seed, const fs::path& out_dir, std::size_t dump_count,
                 std::size_t threads) {
  if (k == 0) throw UsageError("select: --k must be >= 1");
  const auto task_emb = read_embeddings(in.task_emb);
  const auto domain_emb = read_embeddings(in.domain_emb);
  SelectionResult r;
  if (method == SelectionMethod::kKnn) {
    r = select_knn(task_emb, domain_emb, k, threads);
  } else {
    std::vector<std::string> queries;
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < task_emb.rows(); ++i)
      if (!task_emb.is_zero_row(i)) queries.push_back(task_emb.ids[i]);
    for (std::size_t i = 0; i < domain_emb.rows(); ++i)
      if (!domain_emb.is_zero_row(i)) pool.push_back(domain_emb.ids[i]);
    r = select_random(queries, pool, k, derive_seed(seed, "select.rand"));
    r.stats.skipped_zero_queries = task_emb.rows() - queries.size();
    r.stats.excluded_zero_candidates = domain_emb.rows() - pool.size();
  }
  io::write_text_atomic(out_dir / "selection.jsonl", selection_to_jsonl(r));
  io::write_text_atomic(out_dir / "pool.txt", pool_to_text(r));
  json outputs = {"selection.jsonl", "pool.txt"};
  if (dump_count > 0) {
    if (!in.task_sentences || !in.domain_sentences)
      throw UsageError("select: --dump-neighbors needs --task-sentences and --domain-sentences");
    auto texts = text_map(load_sentences(*in.task_sentences));
    for (auto& [id, text] : text_map(load_sentences(*in.domain_sentences)))
      texts.emplace(id, std::move(text));
    io::write_text_atomic(out_dir / "neighbors.txt", dump_neighbors(r, texts, dump_count));
    outputs.push_back("neighbors.txt");
  }
  return json{{"command", "select"},
              {"method", to_string(r.method)},
              {"k", r.k},
              {"queries", r.stats.queries},
              {"unique_candidates", r.stats.unique_candidates},
              {"total_pairs", r.stats.total_pairs},
              {"skipped_zero_queries", r.stats.skipped_zero_queries},
              {"excluded_zero_candidates", r.stats.excluded_zero_candidates},
              {"outputs", outputs}};
}

json step_assemble(const fs::path& task_sentences, const fs::path& domain_sentences,
                   const std::optional<fs::path>& selection,
                   const std::optional<fs::path>& curated_documents, const fs::path& out) {
  const auto task = load_sentences(task_sentences);
  const auto domain = load_sentences(domain_sentences);
  std::optional<SelectionResult> sel;
  if (selection) sel = selection_from_jsonl(*selection);
  std::vector<SentenceRecord> curated;
  if (curated_documents) curated = split_corpus(load_documents(*curated_documents));
  const auto corpus = assemble_corpus(task, sel ? &*sel : nullptr, domain, curated);
  io::AtomicFile file(out);
  for (const auto& d : corpus_documents(corpus)) {
    auto j = io::to_json(d);
    file.stream() << j.dump() << '\n';
  }
  file.commit();
  return json{{"command", "assemble"},
              {"entries", corpus.entries.size()},
              {"task", corpus.count(Provenance::kTask)},
              {"knn", corpus.count(Provenance::kKnn)},
              {"rand", corpus.count(Provenance::kRand)},
              {"curated", corpus.count(Provenance::kCurated)},
              {"storage_bytes", fs::file_size(out)},
              {"output", name_of(out)}};
}

json step_mask(const fs::path& sequences, std::size_t epochs, double p, std::uint64_t seed,
               const fs::path& out) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("mask: --mask-prob must be in [0, 1]");
  if (epochs == 0) throw UsageError("mask: --epochs must be >= 1");
  const auto seqs = io::read_sequences(sequences);
  io::AtomicFile file(out);
  std::size_t emitted = 0;
  std::size_t positions = 0;
  std::size_t masked = 0;
  augment_epochs(seqs, epochs, p, derive_seed(seed, "mask"), [&](const MaskedSequence& m) {
    file.stream() << to_json(m).dump() << '\n';
    ++emitted;
    positions += m.tokens.size();
    masked += m.masked_positions.size();
  });
  file.commit();
  return json{{"command", "mask"},
              {"sequences", seqs.size()},
              {"epochs", epochs},
              {"mask_prob", p},
              {"emitted", emitted},
              {"positions", positions},
              {"masked", masked},
              {"output", name_of(out)}};
}

json step_lm_matrix(const std::vector<fs::path>& corpora, std::size_t order, double alpha,
                    double holdout_fraction, std::uint64_t seed, const fs::path& out) {
  if (corpora.size() < 2) throw UsageError("lm-matrix: need at least two corpora");
  std::vector<DomainCorpus> domains;
  std::set<std::string> names;
  for (const auto& c : corpora) {
    auto docs = load_documents(c);
    std::string name = corpus_domain_name(c, docs);
    if (!names.insert(name).second)
      throw DataError("lm-matrix: two corpora share the domain name " + name);
    domains.push_back({std::move(name), std::move(docs)});
  }
  const auto m = cross_domain_matrix(domains, order, alpha, holdout_fraction, seed);
  fs::path json_out = out;
  json_out.replace_extension(".json");
  io::write_text_atomic(out, loss_matrix_to_tsv(m));
  io::write_text_atomic(json_out, to_json(m).dump(2) + "\n");
  return json{{"command", "lm-matrix"},
              {"domains", m.model_domains},
              {"order", order},
              {"alpha", alpha},
              {"outputs", {name_of(out), name_of(json_out)}}};
}

json run_pipeline(const PipelineConfig& cfg) {
  if (cfg.domain_corpus.empty() || cfg.task_corpus.empty())
    throw UsageError("pipeline: domain_corpus and task_corpus are required");
  const fs::path out = cfg.out_dir;
  fs::create_directories(out);
  json steps = json::array();

  steps.push_back(step_ingest(cfg.domain_corpus, out / "ingest" / "domain", cfg.max_len, cfg.seed));
  steps.push_back(step_ingest(cfg.task_corpus, out / "ingest" / "task", cfg.max_len, cfg.seed));

  const auto domain_docs = load_documents(cfg.domain_corpus);
  const auto task_docs = load_documents(cfg.task_corpus);
  std::vector<fs::path> domains = {cfg.domain_corpus};
  domains.insert(domains.end(), cfg.other_corpora.begin(), cfg.other_corpora.end());

  const StopwordSet stopwords = load_stopwords(cfg.stopwords);
  for (const auto& d : domains) {
    const auto docs = load_documents(d);
    const std::optional<std::size_t> sample =
        cfg.vocab_sample_docs < docs.size() ? std::optional(cfg.vocab_sample_docs) : std::nullopt;
    steps.push_back(step_vocab(d, cfg.vocab_k, sample, stopwords, cfg.seed,
                               out / "vocab" / (corpus_domain_name(d, docs) + ".tsv")));
  }
  if (domains.size() >= 2) {
    std::size_t smallest = domain_docs.size();
    for (const auto& d : cfg.other_corpora) smallest = std::min(smallest, load_documents(d).size());
    const std::optional<std::size_t> sample =
        cfg.vocab_sample_docs < smallest ? std::optional(cfg.vocab_sample_docs) : std::nullopt;
    steps.push_back(step_overlap(domains, cfg.vocab_k, sample, stopwords, cfg.seed,
                                 out / "vocab" / "overlap.tsv",
                                 corpus_domain_name(cfg.domain_corpus, domain_docs)));
    steps.push_back(step_lm_matrix(domains, cfg.ngram_order, cfg.ngram_alpha,
                                   cfg.holdout_fraction, cfg.seed, out / "lm" / "loss_matrix.tsv"));
  }

  steps.push_back(step_dedup(out / "ingest" / "domain" / "sentences.jsonl", cfg.domain_sample,
                             cfg.seed, out / "pool" / "domain_sample.jsonl"));
  steps.push_back(step_embed(out / "pool" / "domain_sample.jsonl",
                             out / "ingest" / "task" / "sentences.jsonl", out / "embed", cfg.dim,
                             cfg.max_vocab, cfg.seed, cfg.threads));
  const SelectInputs sel_in{out / "embed" / "task.emb", out / "embed" / "domain.emb",
                            out / "ingest" / "task" / "sentences.jsonl",
                            out / "pool" / "domain_sample.jsonl"};
  steps.push_back(step_select(sel_in, cfg.method, cfg.k, cfg.seed, out / "select",
                              cfg.dump_neighbors, cfg.threads));
  steps.push_back(step_assemble(out / "ingest" / "task" / "sentences.jsonl",
                                out / "pool" / "domain_sample.jsonl",
                                out / "select" / "selection.jsonl", cfg.curated_corpus,
                                out / "corpus" / "augmented.jsonl"));
  const json assembled = steps.back();
  steps.push_back(step_ingest(out / "corpus" / "augmented.jsonl", out / "corpus", cfg.max_len,
                              cfg.seed));
  steps.push_back(step_mask(out / "corpus" / "sequences.jsonl", cfg.epochs, cfg.mask_prob,
                            cfg.seed, out / "mask" / "masked.jsonl"));

  // Step accounting for the phases this run can compare.
  const Phase selected_phase =
      cfg.curated_corpus ? Phase{PhaseKind::kCuratedTapt, 0}
      : cfg.method == SelectionMethod::kKnn ? Phase{PhaseKind::kKnnTapt, cfg.k}
                                             : Phase{PhaseKind::kRandTapt, cfg.k};
  const auto tapt = plan_phase({PhaseKind::kTapt, 0}, task_docs.size(), cfg.epochs,
                               fs::file_size(cfg.task_corpus));
  const auto augmented = plan_phase(selected_phase, assembled["entries"].get<std::uint64_t>(),
                                    cfg.epochs, assembled["storage_bytes"].get<std::uint64_t>());
  PlanOverrides dapt_override;
  if (cfg.dapt_steps > 0) dapt_override.fixed_steps = cfg.dapt_steps;
  const auto dapt = plan_phase({PhaseKind::kDapt, 0}, domain_docs.size(), 1,
                               fs::file_size(cfg.domain_corpus), dapt_override);
  const std::vector<PhasePlan> plans = {tapt, augmented, dapt, combine_plans(dapt, tapt)};
  const auto comparison = compare_plans(plans);
  io::write_text_atomic(out / "plan" / "plan.json", to_json(augmented).dump(2) + "\n");
  io::write_text_atomic(out / "plan" / "comparison.tsv", comparison.to_text());
  io::write_text_atomic(out / "plan" / "comparison.json", comparison.to_json().dump(2) + "\n");
  steps.push_back(json{{"command", "plan"},
                       {"phase", selected_phase.name()},
                       {"steps", augmented.steps},
                       {"steps_display", format_steps(augmented.steps)},
                       {"max_ratio", comparison.max_ratio()},
                       {"outputs", {"plan.json", "comparison.tsv", "comparison.json"}}});

  json summary{{"command", "pipeline"},
               {"seed", cfg.seed},
               {"stopwords_checksum",
                cfg.stopwords ? std::string("custom") : default_stopwords_checksum()},
               {"steps", steps}};
  io::write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

}  // namespace dapt
