/*
 * Copyright 2026 The lexicl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexicl/lexicl.hpp"

namespace {

using namespace lexicl;

struct BackendFlags {
  std::string llm = "mock-echo";
  std::string embed = "local";
  std::string embed_cache;
  double rps = 2.0;
  std::string system_message;
  std::string record_fixtures;
};

std::shared_ptr<Embedder> make_embedder(const BackendFlags& f) {
  std::shared_ptr<EmbeddingBackend> backend;
  if (f.embed == "local") {
    backend = std::make_shared<HashedNgramBackend>();
  } else if (f.embed == "remote") {
    auto cfg = RemoteEmbeddingConfig::from_env();
    if (cfg.base_url.empty()) throw InvalidConfig("EMBED_API_BASE is not set");
    backend = std::make_shared<RemoteEmbeddingBackend>(cfg);
  } else {
    throw InvalidConfig("unknown embedding backend '" + f.embed + "' (expected local or remote)");
  }
  std::shared_ptr<EmbeddingCacheFile> cache;
  if (!f.embed_cache.empty()) cache = std::make_shared<EmbeddingCacheFile>(f.embed_cache);
  return std::make_shared<Embedder>(backend, cache);
}

std::shared_ptr<LlmBackend> make_llm(const BackendFlags& f, const std::vector<Record>& corpus) {
  std::shared_ptr<LlmBackend> llm;
  if (f.llm == "mock-echo") {
    auto echo = std::make_shared<MockEchoBackend>();
    for (const Record& r : corpus) echo->register_gold(r.id, serialize_fact_set(r.facts));
    llm = echo;
  } else if (f.llm.rfind("mock-fixture:", 0) == 0) {
    llm = MockFixtureBackend::from_file(f.llm.substr(13));
  } else if (f.llm == "remote") {
    auto cfg = RemoteChatConfig::from_env();
    if (cfg.base_url.empty()) throw InvalidConfig("LLM_API_BASE is not set");
    cfg.requests_per_second = f.rps;
    cfg.system_message = f.system_message;
    llm = std::make_shared<RemoteChatBackend>(cfg);
  } else {
    throw InvalidConfig("unknown llm backend '" + f.llm + "' (expected mock-echo, mock-fixture:<path> or remote)");
  }
  if (!f.record_fixtures.empty()) llm = std::make_shared<RecordingBackend>(llm, f.record_fixtures);
  return llm;
}

int cmd_validate(const std::string& corpus) {
  CorpusScan scan = scan_corpus(corpus);
  for (const Diagnostic& d : scan.diagnostics) std::cerr << d.str() << '\n';
  std::cout << scan.records.size() << " records, " << scan.error_count() << " errors, "
            << scan.diagnostics.size() - scan.error_count() << " warnings\n";
  return scan.ok() ? 0 : 1;
}

int cmd_split(const std::string& corpus, std::int64_t seed, double ratio, const std::string& out) {
  Split s = make_split(load_corpus(corpus), seed, ratio);
  const std::string text = split_to_json(s).dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw IoError("cannot write " + out);
    std::cerr << s.train_ids.size() << " train, " << s.test_ids.size() << " test -> " << out << '\n';
  }
  return 0;
}

int cmd_run(ExperimentConfig cfg, const BackendFlags& flags) {
  if (cfg.corpus_path.empty()) throw InvalidConfig("no corpus given (--corpus or corpus_path in --config)");
  std::vector<Diagnostic> warnings;
  std::vector<Record> corpus = load_corpus(cfg.corpus_path, &warnings);
  for (const Diagnostic& d : warnings) std::cerr << d.str() << '\n';
  auto embedder = make_embedder(flags);
  auto llm = make_llm(flags, corpus);
  if (cfg.generation.model.empty()) cfg.generation.model = llm->identity();
  Runner runner(cfg, embedder, llm);
  RunManifest m = runner.run(&corpus);
  for (const CellResult& c : m.cells) {
    std::printf("seed=%lld ratio=%s lambda=%s shots=%s n=%zu exact=%.4f soft=%.4f\n", static_cast<long long>(c.seed),
                format_number(c.ratio).c_str(), format_number(c.lambda).c_str(), c.shots.c_str(), c.aggregate.n,
                c.aggregate.exact_acc, c.aggregate.soft_acc);
  }
  std::printf("manifest: %s\n", m.manifest_path.string().c_str());
  return 0;
}

int cmd_report(const std::vector<std::string>& manifests, const std::string& out) {
  std::vector<std::filesystem::path> paths(manifests.begin(), manifests.end());
  const std::string csv = report_csv(paths);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f << csv;
    if (!f) throw IoError("cannot write " + out);
  }
  return 0;
}

int cmd_synth(const synthetic::Options& opt, const std::string& out) {
  auto records = synthetic::generate(opt);
  write_corpus(out, records);
  std::cerr << records.size() << " records -> " << out << '\n';
  return 0;
}

int cmd_stats(const std::string& corpus) {
  std::cout << stats_to_json(corpus_stats(load_corpus(corpus))).dump(2) << '\n';
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexicl: few-shot legal case to PROLEG fact translation and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lexicl 0.1.0");

  std::string corpus;
  auto* validate = app.add_subcommand("validate", "Check a JSONL corpus; exit 0 iff it has no errors");
  validate->add_option("corpus", corpus, "Corpus JSONL")->required();

  std::int64_t split_seed = 0;
  double split_ratio = 0.6;
  std::string split_out;
  auto* split = app.add_subcommand("split", "Build a template-disjoint train/test split manifest");
  split->add_option("corpus", corpus, "Corpus JSONL")->required();
  split->add_option("--seed", split_seed, "Shuffle seed");
  split->add_option("--ratio", split_ratio, "Seen (train) ratio in (0, 1)");
  split->add_option("-o,--out", split_out, "Output file (stdout if omitted)");

  std::string config_file;
  std::string corpus_flag, out_dir, scope, averaging, model;
  std::vector<std::int64_t> seeds;
  std::vector<double> ratios, lambdas;
  std::vector<std::string> shots;
  std::size_t boundary = 0, concurrency = 0;
  double temperature = 0.0;
  int max_tokens = 0;
  std::int64_t gen_seed = 0;
  bool no_dedup = false, keep_query = false, no_skeleton = false;
  BackendFlags flags;
  auto* run = app.add_subcommand("run", "Run the selection, prompting, generation and scoring pipeline");
  run->add_option("-c,--config", config_file, "Declarative JSON config; flags override its fields");
  auto* o_corpus = run->add_option("--corpus", corpus_flag, "Corpus JSONL");
  auto* o_seeds = run->add_option("--seeds", seeds, "Split seeds")->delimiter(',');
  auto* o_ratios = run->add_option("--ratios", ratios, "Seen ratios")->delimiter(',');
  auto* o_lambdas = run->add_option("--lambda", lambdas, "Relevance/diversity trade-off(s)")->delimiter(',');
  auto* o_shots = run->add_option("--shots", shots, "Shot settings such as 3c+3t, 5c")->delimiter(',');
  auto* o_boundary = run->add_option("--boundary-size", boundary, "Candidate boundary size");
  auto* o_scope = run->add_option("--scope", scope, "Re-rank scope")->check(CLI::IsMember({"boundary", "full_pool"}));
  auto* o_avg = run->add_option("--soft-averaging", averaging, "Soft-match averaging")
                    ->check(CLI::IsMember({"pooled", "per_fact"}));
  run->add_flag("--no-dedup-templates", no_dedup, "Keep one template demonstration per train record");
  run->add_flag("--keep-query-in-pool", keep_query, "Do not drop the query's own id from the pools");
  run->add_flag("--no-skeleton-block", no_skeleton, "Omit the formula template block from demonstrations");
  auto* o_conc = run->add_option("--concurrency", concurrency, "Samples in flight");
  auto* o_model = run->add_option("--model", model, "Model name sent to the chat endpoint and used in cell names");
  auto* o_temp = run->add_option("--temperature", temperature, "Sampling temperature");
  auto* o_maxtok = run->add_option("--max-tokens", max_tokens, "Completion token limit");
  auto* o_genseed = run->add_option("--gen-seed", gen_seed, "Decoding seed (defaults to the split seed)");
  auto* o_out = run->add_option("-o,--out", out_dir, "Output directory");
  run->add_option("--llm", flags.llm, "mock-echo | mock-fixture:<path> | remote")->capture_default_str();
  run->add_option("--embed", flags.embed, "local | remote")->capture_default_str();
  run->add_option("--embed-cache", flags.embed_cache, "Persistent embedding cache file");
  run->add_option("--rps", flags.rps, "Remote LLM requests per second")->capture_default_str();
  run->add_option("--system-message", flags.system_message, "Optional system message for remote chat");
  run->add_option("--record-fixtures", flags.record_fixtures, "Append completions to a replayable fixture file");

  std::vector<std::string> manifests;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Long-format CSV over one or more run manifests");
  report->add_option("manifests", manifests, "manifest.json files")->required();
  report->add_option("-o,--out", report_out, "Output CSV (stdout if omitted)");

  synthetic::Options synth_opt;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write the bundled synthetic corpus");
  synth->add_option("-o,--out", synth_out, "Output JSONL")->required();
  synth->add_option("--seed", synth_opt.seed, "Generator seed")->capture_default_str();
  synth->add_option("--templates-per-issue", synth_opt.templates_per_issue)->capture_default_str();
  synth->add_option("--instances-per-template", synth_opt.instances_per_template)->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", corpus, "Corpus JSONL")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(corpus);
    if (*split) return cmd_split(corpus, split_seed, split_ratio, split_out);
    if (*report) return cmd_report(manifests, report_out);
    if (*synth) return cmd_synth(synth_opt, synth_out);
    if (*stats) return cmd_stats(corpus);
    if (*run) {
      ExperimentConfig cfg;
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw IoError("cannot open config " + config_file);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = config_from_json(j);
      }
      if (*o_corpus) cfg.corpus_path = corpus_flag;
      if (*o_seeds) cfg.seeds = seeds;
      if (*o_ratios) cfg.seen_ratios = ratios;
      if (*o_lambdas) cfg.lambdas = lambdas;
      if (*o_shots) cfg.shots = shots;
      if (*o_boundary) cfg.boundary_size = boundary;
      if (*o_scope) cfg.scope = scope == "boundary" ? CandidateScope::Boundary : CandidateScope::FullPool;
      if (*o_avg) cfg.soft_averaging = averaging == "pooled" ? SoftAveraging::PooledSlots : SoftAveraging::PerFact;
      if (no_dedup) cfg.dedup_templates = false;
      if (keep_query) cfg.exclude_query_from_pools = false;
      if (no_skeleton) cfg.include_skeleton_block = false;
      if (*o_conc) cfg.concurrency = concurrency;
      if (*o_model) cfg.generation.model = model;
      if (*o_temp) cfg.generation.temperature = temperature;
      if (*o_maxtok) cfg.generation.max_tokens = max_tokens;
      if (*o_genseed) cfg.generation.seed = gen_seed;
      if (*o_out) cfg.output_dir = out_dir;
      return cmd_run(cfg, flags);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << '\n';
    return 3;
  }
  return 0;
}
