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

#include "dapt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dapt/errors.hpp"
#include "dapt/jsonl.hpp"
#include "dapt/pipeline.hpp"

namespace dapt {

namespace {

using json = nlohmann::ordered_json;

std::size_t resolve_threads(std::size_t t) {
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// The default applies only when the corpus is larger; an explicit value
/// larger than the corpus is left for the sampler to reject.
std::optional<std::size_t> effective_sample(const CLI::Option* opt, std::size_t value,
                                            std::size_t available) {
  if (opt->count() > 0) return value;
  if (value < available) return value;
  return std::nullopt;
}

std::size_t count_jsonl_records(const fs::path& path) {
  std::size_t n = 0;
  io::for_each_jsonl(path, [&](const json&, std::size_t) { ++n; });
  return n;
}

json error_json(std::string_view kind, std::string_view message) {
  return json{{"error", kind}, {"message", message}};
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus curation for domain- and task-adaptive pretraining", "dapt"};
  app.require_subcommand(1);

  std::function<json()> action;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Run seed; module streams derive from it");
  };
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };

  // ingest
  fs::path ingest_in, ingest_out;
  std::size_t max_len = kDefaultMaxLen;
  auto* ingest = app.add_subcommand("ingest", "Split documents into sentences and pack sequences");
  ingest->add_option("--input", ingest_in, "documents.jsonl")->required();
  ingest->add_option("--out-dir", ingest_out, "Output directory")->required();
  ingest->add_option("--max-len", max_len, "Maximum tokens per packed sequence")
      ->check(CLI::PositiveNumber);
  add_seed(ingest);
  ingest->callback([&] { action = [&] { return step_ingest(ingest_in, ingest_out, max_len, seed); }; });

  // vocab
  fs::path vocab_in, vocab_out;
  std::size_t vocab_k = kDefaultVocabK;
  std::size_t sample_docs = kDefaultVocabSampleDocs;
  std::optional<fs::path> stopwords_path;
  auto* vocab = app.add_subcommand("vocab", "Top-k unigram vocabulary of one domain");
  vocab->add_option("--corpus", vocab_in, "documents.jsonl")->required();
  vocab->add_option("--out", vocab_out, "Output TSV (term<TAB>count)")->required();
  vocab->add_option("--vocab-k", vocab_k, "Vocabulary size")->check(CLI::PositiveNumber);
  auto* vocab_sample_opt =
      vocab->add_option("--sample-docs", sample_docs, "Documents sampled per domain")
          ->check(CLI::PositiveNumber);
  vocab->add_option("--stopwords", stopwords_path, "Stopword file replacing the built-in list");
  add_seed(vocab);
  vocab->callback([&] {
    action = [&] {
      const auto n = count_jsonl_records(vocab_in);
      return step_vocab(vocab_in, vocab_k, effective_sample(vocab_sample_opt, sample_docs, n),
                        load_stopwords(stopwords_path), seed, vocab_out);
    };
  });

  // overlap
  std::vector<fs::path> overlap_in;
  fs::path overlap_out;
  std::optional<std::string> target;
  auto* overlap = app.add_subcommand("overlap", "Pairwise vocabulary overlap matrix");
  overlap->add_option("--corpora", overlap_in, "documents.jsonl per domain")->required();
  overlap->add_option("--out", overlap_out, "Output TSV matrix")->required();
  overlap->add_option("--vocab-k,--k", vocab_k, "Vocabulary size")->check(CLI::PositiveNumber);
  auto* overlap_sample_opt =
      overlap->add_option("--sample-docs", sample_docs, "Documents sampled per domain")
          ->check(CLI::PositiveNumber);
  overlap->add_option("--stopwords", stopwords_path, "Stopword file replacing the built-in list");
  overlap->add_option("--target", target, "Report the least-overlapping domain for this one");
  add_seed(overlap);
  overlap->callback([&] {
    action = [&] {
      std::size_t smallest = SIZE_MAX;
      for (const auto& c : overlap_in) smallest = std::min(smallest, count_jsonl_records(c));
      return step_overlap(overlap_in, vocab_k,
                          effective_sample(overlap_sample_opt, sample_docs, smallest),
                          load_stopwords(stopwords_path), seed, overlap_out, target);
    };
  });

  // dedup
  fs::path dedup_in, dedup_out;
  std::size_t domain_sample = kDefaultDomainSampleSentences;
  auto* dedup = app.add_subcommand("dedup", "Sample then exact-deduplicate sentences");
  dedup->add_option("--input", dedup_in, "sentences.jsonl")->required();
  dedup->add_option("--out", dedup_out, "Output sentences.jsonl")->required();
  auto* dedup_sample_opt =
      dedup->add_option("--sample", domain_sample, "Sentences sampled before dedup")
          ->check(CLI::PositiveNumber);
  add_seed(dedup);
  dedup->callback([&] {
    action = [&] {
      const auto n = count_jsonl_records(dedup_in);
      return step_dedup(dedup_in, effective_sample(dedup_sample_opt, domain_sample, n), seed,
                        dedup_out);
    };
  });

  // embed
  fs::path embed_domain, embed_task, embed_out;
  std::size_t dim = kDefaultEmbedDim;
  std::size_t max_vocab = kDefaultEmbedMaxVocab;
  auto* embed = app.add_subcommand("embed", "Fit the embedder on domain sentences and embed both sides");
  embed->add_option("--domain", embed_domain, "Domain sentences.jsonl")->required();
  embed->add_option("--task", embed_task, "Task sentences.jsonl")->required();
  embed->add_option("--out-dir", embed_out, "Output directory")->required();
  embed->add_option("--dim", dim, "Embedding dimension")->check(CLI::PositiveNumber);
  embed->add_option("--max-vocab", max_vocab, "Embedder vocabulary cap")->check(CLI::PositiveNumber);
  add_seed(embed);
  add_threads(embed);
  embed->callback([&] {
    action = [&] {
      return step_embed(embed_domain, embed_task, embed_out, dim, max_vocab, seed,
                        resolve_threads(threads));
    };
  });

  // select
  SelectInputs sel_in;
  fs::path select_out;
  std::string method = "knn";
  std::size_t k = kDefaultSelectK;
  std::size_t dump_n = 0;
  auto* select = app.add_subcommand("select", "kNN or random candidate selection");
  select->add_option("--task-emb", sel_in.task_emb, "Task EMB1 file")->required();
  select->add_option("--domain-emb", sel_in.domain_emb, "Domain EMB1 file")->required();
  select->add_option("--out-dir", select_out, "Output directory")->required();
  select->add_option("--method", method, "knn or rand")->check(CLI::IsMember({"knn", "rand"}));
  select->add_option("--k", k, "Candidates per task sentence")->check(CLI::PositiveNumber);
  select->add_option("--dump-neighbors", dump_n, "Write top-N neighbor texts per query");
  select->add_option("--task-sentences", sel_in.task_sentences, "Task sentences.jsonl (for dumps)");
  select->add_option("--domain-sentences", sel_in.domain_sentences,
                     "Domain sentences.jsonl (for dumps)");
  add_seed(select);
  add_threads(select);
  select->callback([&] {
    action = [&] {
      return step_select(sel_in, parse_selection_method(method), k, seed, select_out, dump_n,
                         resolve_threads(threads));
    };
  });

  // assemble
  fs::path asm_task, asm_domain, asm_out;
  std::optional<fs::path> asm_selection, asm_curated;
  auto* assemble = app.add_subcommand("assemble", "Build the augmented TAPT corpus");
  assemble->add_option("--task", asm_task, "Task sentences.jsonl")->required();
  assemble->add_option("--domain", asm_domain, "Domain sentences.jsonl")->required();
  assemble->add_option("--selection", asm_selection, "selection.jsonl");
  assemble->add_option("--curated", asm_curated, "Curated documents.jsonl");
  assemble->add_option("--out", asm_out, "Output documents.jsonl")->required();
  assemble->callback([&] {
    action = [&] { return step_assemble(asm_task, asm_domain, asm_selection, asm_curated, asm_out); };
  });

  // mask
  fs::path mask_in, mask_out;
  std::size_t epochs = kDefaultTaptEpochs;
  double mask_prob = kDefaultMaskProb;
  auto* mask = app.add_subcommand("mask", "Per-epoch masked copies of packed sequences");
  mask->add_option("--input", mask_in, "sequences.jsonl")->required();
  mask->add_option("--out", mask_out, "Output masked.jsonl")->required();
  mask->add_option("--epochs", epochs, "Epochs")->check(CLI::PositiveNumber);
  mask->add_option("--mask-prob", mask_prob, "Masking probability")->check(CLI::Range(0.0, 1.0));
  add_seed(mask);
  mask->callback([&] {
    action = [&] { return step_mask(mask_in, epochs, mask_prob, seed, mask_out); };
  });

  // lm-matrix
  std::vector<fs::path> lm_in;
  fs::path lm_out;
  std::size_t order = kDefaultNgramOrder;
  double alpha = kDefaultNgramAlpha;
  double holdout = kDefaultHoldoutFraction;
  auto* lm = app.add_subcommand("lm-matrix", "Cross-domain n-gram loss matrix");
  lm->add_option("--corpora", lm_in, "documents.jsonl per domain")->required();
  lm->add_option("--out", lm_out, "Output TSV (a .json sibling is written too)")->required();
  lm->add_option("--order", order, "n-gram order")->check(CLI::PositiveNumber);
  lm->add_option("--alpha", alpha, "Additive smoothing")->check(CLI::PositiveNumber);
  lm->add_option("--holdout", holdout, "Held-out fraction per domain")
      ->check(CLI::Range(0.0, 1.0));
  add_seed(lm);
  lm->callback([&] {
    action = [&] { return step_lm_matrix(lm_in, order, alpha, holdout, seed, lm_out); };
  });

  // plan
  std::string phase_name;
  std::optional<std::uint64_t> docs, storage_bytes, fixed_steps, dapt_docs;
  std::uint64_t plan_epochs = kDefaultTaptEpochs;
  std::uint64_t dapt_steps = kDaptFixedSteps;
  std::uint64_t dapt_storage = 0;
  std::optional<fs::path> plan_corpus, plan_out;
  std::vector<fs::path> compare_in;
  auto* plan = app.add_subcommand("plan", "Step accounting for a pretraining phase");
  plan->add_option("--phase", phase_name,
                   "DAPT, TAPT, KNN_TAPT(k), RAND_TAPT(k), CURATED_TAPT or DAPT_THEN_TAPT");
  plan->add_option("--docs", docs, "Documents in the pretraining corpus");
  plan->add_option("--epochs", plan_epochs, "Epochs")->check(CLI::PositiveNumber);
  plan->add_option("--storage-bytes", storage_bytes, "Corpus size in bytes");
  plan->add_option("--corpus", plan_corpus, "Measure docs and bytes from this JSONL file");
  plan->add_option("--fixed-steps", fixed_steps, "Override the step formula");
  plan->add_option("--dapt-docs", dapt_docs, "DAPT documents (DAPT_THEN_TAPT)");
  plan->add_option("--dapt-steps", dapt_steps, "Fixed DAPT steps (0 = formula)");
  plan->add_option("--dapt-storage-bytes", dapt_storage, "DAPT corpus bytes (DAPT_THEN_TAPT)");
  plan->add_option("--compare", compare_in, "Compare existing plan.json files");
  plan->add_option("--out", plan_out, "Write plan.json (or comparison JSON)");
  plan->callback([&] {
    action = [&]() -> json {
      if (!compare_in.empty()) {
        std::vector<PhasePlan> plans;
        for (const auto& p : compare_in) {
          const auto j = json::parse(io::read_text(p), nullptr, false);
          if (j.is_discarded()) throw DataError(p.string() + ": invalid JSON");
          plans.push_back(plan_from_json(j));
        }
        if (plans.size() < 2) throw UsageError("plan: --compare needs at least two files");
        const auto c = compare_plans(plans);
        if (plan_out) {
          io::write_text_atomic(*plan_out, c.to_json().dump(2) + "\n");
          fs::path tsv = *plan_out;
          tsv.replace_extension(".tsv");
          io::write_text_atomic(tsv, c.to_text());
        }
        json s = c.to_json();
        s["command"] = "plan";
        return s;
      }
      if (phase_name.empty()) throw UsageError("plan: --phase or --compare is required");
      Phase phase;
      try {
        phase = Phase::parse(phase_name);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("plan: ") + e.what());
      }
      std::uint64_t n_docs = 0;
      std::uint64_t bytes = storage_bytes.value_or(0);
      if (plan_corpus) {
        n_docs = count_jsonl_records(*plan_corpus);
        if (!storage_bytes) bytes = fs::file_size(*plan_corpus);
      }
      if (docs) n_docs = *docs;
      if (n_docs == 0) throw UsageError("plan: --docs or --corpus is required");
      PlanOverrides ov;
      ov.fixed_steps = fixed_steps;
      PhasePlan p;
      if (phase.kind == PhaseKind::kDaptThenTapt) {
        if (!dapt_docs) throw UsageError("plan: DAPT_THEN_TAPT needs --dapt-docs");
        PlanOverrides dov;
        if (dapt_steps > 0) dov.fixed_steps = dapt_steps;
        const auto d = plan_phase({PhaseKind::kDapt, 0}, *dapt_docs, 1, dapt_storage, dov);
        const auto t = plan_phase({PhaseKind::kTapt, 0}, n_docs, plan_epochs, bytes, ov);
        p = combine_plans(d, t);
      } else {
        if (phase.kind == PhaseKind::kDapt && !ov.fixed_steps && dapt_steps > 0)
          ov.fixed_steps = dapt_steps;
        p = plan_phase(phase, n_docs, plan_epochs, bytes, ov);
      }
      if (plan_out) io::write_text_atomic(*plan_out, to_json(p).dump(2) + "\n");
      json s = to_json(p);
      s["command"] = "plan";
      return s;
    };
  });

  // pipeline
  std::optional<fs::path> config_path;
  auto* pipeline = app.add_subcommand("pipeline", "Run the full curation chain from a config");
  pipeline->add_option("--config", config_path, "JSON config")->required();
  auto* p_seed = pipeline->add_option("--seed", seed, "Run seed");
  auto* p_threads = pipeline->add_option("--threads", threads, "Worker threads (0 = all cores)");
  auto* p_k = pipeline->add_option("--k", k, "Candidates per task sentence")->check(CLI::PositiveNumber);
  auto* p_method = pipeline->add_option("--method", method, "knn or rand")
                       ->check(CLI::IsMember({"knn", "rand"}));
  auto* p_mask = pipeline->add_option("--mask-prob", mask_prob, "Masking probability")
                     ->check(CLI::Range(0.0, 1.0));
  auto* p_epochs = pipeline->add_option("--epochs", epochs, "Epochs")->check(CLI::PositiveNumber);
  auto* p_vocab_k = pipeline->add_option("--vocab-k", vocab_k, "Vocabulary size")
                        ->check(CLI::PositiveNumber);
  auto* p_dim = pipeline->add_option("--dim", dim, "Embedding dimension")->check(CLI::PositiveNumber);
  auto* p_max_vocab = pipeline->add_option("--max-vocab", max_vocab, "Embedder vocabulary cap")
                          ->check(CLI::PositiveNumber);
  std::optional<fs::path> out_dir;
  pipeline->add_option("--out-dir", out_dir, "Output directory (overrides the config)");
  pipeline->callback([&] {
    action = [&] {
      const auto j = json::parse(io::read_text(*config_path), nullptr, false);
      if (j.is_discarded()) throw UsageError(config_path->string() + ": invalid JSON");
      PipelineConfig cfg = config_from_json(j, config_path->parent_path());
      if (p_seed->count()) cfg.seed = seed;
      if (p_threads->count()) cfg.threads = threads;
      if (p_k->count()) cfg.k = k;
      if (p_method->count()) cfg.method = parse_selection_method(method);
      if (p_mask->count()) cfg.mask_prob = mask_prob;
      if (p_epochs->count()) cfg.epochs = epochs;
      if (p_vocab_k->count()) cfg.vocab_k = vocab_k;
      if (p_dim->count()) cfg.dim = dim;
      if (p_max_vocab->count()) cfg.max_vocab = max_vocab;
      if (out_dir) cfg.out_dir = *out_dir;
      cfg.threads = resolve_threads(cfg.threads);
      return run_pipeline(cfg);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const json summary = action();
    out << summary.dump() << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << error_json("usage", e.what()).dump() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << error_json("data", e.what()).dump() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << error_json("data", e.what()).dump() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << error_json("data", e.what()).dump() << '\n';
    return kExitData;
  } catch (const nlohmann::ordered_json::exception& e) {
    err << error_json("data", e.what()).dump() << '\n';
    return kExitData;
  }
}

}  // namespace dapt
