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

#pragma once

// End-to-end experiment orchestration: split -> pools -> selection -> prompt
// -> generation -> scoring, swept over seeds, seen ratios, lambdas and shot
// configurations. All artifacts land under one output directory:
//
//   <out>/config.json
//   <out>/splits/seed<S>_ratio<R>.json
//   <out>/cells/<model>__seed<S>_ratio<R>_lambda<L>_<shots>/{prompts,completions,scores}.jsonl
//   <out>/completions_cache.jsonl       (content-hash keyed, reused on rerun)
//   <out>/aggregate.json
//   <out>/manifest.json

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexicl/dataset.hpp"
#include "lexicl/embeddings.hpp"
#include "lexicl/error.hpp"
#include "lexicl/hash.hpp"
#include "lexicl/llm.hpp"
#include "lexicl/metrics.hpp"
#include "lexicl/prompting.hpp"
#include "lexicl/selection.hpp"

namespace lexicl {

/// Fixed-precision decimal used in file and directory names, e.g. 0.6 -> "0.6".
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct ExperimentConfig {
  std::filesystem::path corpus_path;
  std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
  std::vector<double> seen_ratios{0.2, 0.4, 0.5, 0.6, 0.8};
  std::vector<double> lambdas{0.6};
  std::vector<std::string> shots{"3c+3t"};
  std::size_t boundary_size = 10;
  CandidateScope scope = CandidateScope::Boundary;
  bool dedup_templates = true;
  bool exclude_query_from_pools = true;
  bool include_skeleton_block = true;
  SoftAveraging soft_averaging = SoftAveraging::PooledSlots;
  std::size_t concurrency = 8;
  GenerationConfig generation{};
  std::filesystem::path output_dir = "runs/latest";

  void validate() const {
    if (seeds.empty()) throw InvalidConfig("at least one seed is required");
    if (seen_ratios.empty()) throw InvalidConfig("at least one seen ratio is required");
    for (double r : seen_ratios) {
      if (!(r > 0.0 && r < 1.0)) throw InvalidConfig("seen ratio " + format_number(r) + " is outside (0, 1)");
    }
    if (lambdas.empty()) throw InvalidConfig("at least one lambda is required");
    for (double l : lambdas) {
      if (!(l >= 0.0 && l <= 1.0)) throw InvalidConfig("lambda " + format_number(l) + " is outside [0, 1]");
    }
    if (shots.empty()) throw InvalidConfig("at least one shots setting is required");
    for (const std::string& s : shots) {
      auto [n, m] = parse_shots_label(s);
      if (n + m == 0) throw InvalidConfig("shots '" + s + "' selects nothing");
      if (n > boundary_size || m > boundary_size) {
        throw InvalidConfig("shots '" + s + "' exceed boundary size " + std::to_string(boundary_size));
      }
    }
    if (concurrency == 0) throw InvalidConfig("concurrency must be positive");
  }
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"corpus_path", c.corpus_path.string()},
          {"seeds", c.seeds},
          {"seen_ratios", c.seen_ratios},
          {"lambdas", c.lambdas},
          {"shots", c.shots},
          {"boundary_size", c.boundary_size},
          {"candidate_scope", c.scope == CandidateScope::Boundary ? "boundary" : "full_pool"},
          {"dedup_templates", c.dedup_templates},
          {"exclude_query_from_pools", c.exclude_query_from_pools},
          {"include_skeleton_block", c.include_skeleton_block},
          {"soft_averaging", c.soft_averaging == SoftAveraging::PooledSlots ? "pooled" : "per_fact"},
          {"concurrency", c.concurrency},
          {"generation",
           {{"model", c.generation.model},
            {"temperature", c.generation.temperature},
            {"max_tokens", c.generation.max_tokens},
            {"seed", c.generation.seed ? nlohmann::json(*c.generation.seed) : nlohmann::json(nullptr)},
            {"timeout_ms", c.generation.timeout.count()}}},
          {"output_dir", c.output_dir.string()}};
}

/// Reads a declarative config; absent keys keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c = {}) {
  try {
    if (j.contains("corpus_path")) c.corpus_path = j.at("corpus_path").get<std::string>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::int64_t>>();
    if (j.contains("seen_ratios")) c.seen_ratios = j.at("seen_ratios").get<std::vector<double>>();
    if (j.contains("lambdas")) c.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("lambda")) c.lambdas = {j.at("lambda").get<double>()};
    if (j.contains("shots")) {
      c.shots = j.at("shots").is_array() ? j.at("shots").get<std::vector<std::string>>()
                                         : std::vector<std::string>{j.at("shots").get<std::string>()};
    }
    if (j.contains("boundary_size")) c.boundary_size = j.at("boundary_size").get<std::size_t>();
    if (j.contains("candidate_scope")) {
      auto s = j.at("candidate_scope").get<std::string>();
      if (s != "boundary" && s != "full_pool") throw InvalidConfig("candidate_scope must be boundary or full_pool");
      c.scope = s == "boundary" ? CandidateScope::Boundary : CandidateScope::FullPool;
    }
    if (j.contains("dedup_templates")) c.dedup_templates = j.at("dedup_templates").get<bool>();
    if (j.contains("exclude_query_from_pools")) c.exclude_query_from_pools = j.at("exclude_query_from_pools").get<bool>();
    if (j.contains("include_skeleton_block")) c.include_skeleton_block = j.at("include_skeleton_block").get<bool>();
    if (j.contains("soft_averaging")) {
      auto s = j.at("soft_averaging").get<std::string>();
      if (s != "pooled" && s != "per_fact") throw InvalidConfig("soft_averaging must be pooled or per_fact");
      c.soft_averaging = s == "pooled" ? SoftAveraging::PooledSlots : SoftAveraging::PerFact;
    }
    if (j.contains("concurrency")) c.concurrency = j.at("concurrency").get<std::size_t>();
    if (j.contains("generation")) {
      const auto& g = j.at("generation");
      if (g.contains("model")) c.generation.model = g.at("model").get<std::string>();
      if (g.contains("temperature")) c.generation.temperature = g.at("temperature").get<double>();
      if (g.contains("max_tokens")) c.generation.max_tokens = g.at("max_tokens").get<int>();
      if (g.contains("seed") && !g.at("seed").is_null()) c.generation.seed = g.at("seed").get<std::int64_t>();
      if (g.contains("timeout_ms")) c.generation.timeout = std::chrono::milliseconds(g.at("timeout_ms").get<long long>());
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bad config: ") + e.what());
  }
  return c;
}

struct CellResult {
  std::string model;
  std::int64_t seed = 0;
  double ratio = 0.0;
  double lambda = 0.0;
  std::string shots;
  std::filesystem::path split_path;
  std::filesystem::path prompts_path;
  std::filesystem::path completions_path;
  std::filesystem::path scores_path;
  AggregateScore aggregate;
  std::optional<double> mean_pairwise_sim;
  std::size_t generated = 0;
  std::size_t reused = 0;
};

struct RunManifest {
  nlohmann::json config;
  std::vector<CellResult> cells;
  std::filesystem::path aggregate_path;
  std::filesystem::path manifest_path;
};

/// Paths are written relative to `base` (the run's output directory).
inline nlohmann::json manifest_to_json(const RunManifest& m, const std::filesystem::path& base = {}) {
  auto rel = [&](const std::filesystem::path& p) {
    return (base.empty() ? p : p.lexically_relative(base)).generic_string();
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const CellResult& c : m.cells) {
    nlohmann::json agg;
    to_json(agg, c.aggregate);
    cells.push_back({{"model", c.model},
                     {"seed", c.seed},
                     {"ratio", c.ratio},
                     {"lambda", c.lambda},
                     {"shots", c.shots},
                     {"split", rel(c.split_path)},
                     {"prompts", rel(c.prompts_path)},
                     {"completions", rel(c.completions_path)},
                     {"scores", rel(c.scores_path)},
                     {"exact_acc", c.aggregate.exact_acc},
                     {"soft_acc", c.aggregate.soft_acc},
                     {"n", c.aggregate.n},
                     {"mean_pairwise_sim",
                      c.mean_pairwise_sim ? nlohmann::json(*c.mean_pairwise_sim) : nlohmann::json(nullptr)}});
  }
  return {{"config", m.config}, {"cells", cells}, {"aggregate", rel(m.aggregate_path)}};
}

namespace detail {

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

inline std::string sanitize(std::string s) {
  for (char& c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
              c == '.' || c == '+';
    if (!ok) c = '_';
  }
  return s;
}

}  // namespace detail

/// Persistent prompt -> completion map keyed by SHA-256 of (model, prompt).
class CompletionCache {
 public:
  explicit CompletionCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      try {
        auto j = nlohmann::json::parse(line);
        entries_[j.at("key").get<std::string>()] = j.at("completion").get<std::string>();
      } catch (const nlohmann::json::exception&) {
        // torn trailing write from an interrupted run
      }
    }
  }

  static std::string key(const std::string& model, const std::string& prompt) {
    return sha256_hex(model + '\0' + prompt);
  }

  std::optional<std::string> find(const std::string& k) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& k, const std::string& completion) {
    std::lock_guard lock(mu_);
    if (!entries_.emplace(k, completion).second) return;
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    out << nlohmann::json{{"key", k}, {"completion", completion}}.dump() << '\n';
  }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
};

/// Case pool from train records; template pool deduplicated by template id
/// unless `dedup` is false (then one template item per record).
inline std::pair<Pool, Pool> build_pools(const std::vector<const Record*>& train, bool dedup) {
  std::vector<Demonstration> cases, templates;
  std::set<std::string> seen_templates;
  for (const Record* r : train) {
    cases.push_back({r->id, DemoKind::Case, r->case_text, r->facts, std::nullopt});
    const std::string tid = r->template_id();
    if (dedup) {
      if (!seen_templates.insert(tid).second) continue;
      templates.push_back({"tpl-" + tid, DemoKind::Template, r->template_text, r->facts, std::nullopt});
    } else {
      templates.push_back({"tpl-" + r->id, DemoKind::Template, r->template_text, r->facts, std::nullopt});
    }
  }
  return {Pool(DemoKind::Case, std::move(cases)), Pool(DemoKind::Template, std::move(templates))};
}

class Runner {
 public:
  Runner(ExperimentConfig cfg, std::shared_ptr<Embedder> embedder, std::shared_ptr<LlmBackend> llm)
      : cfg_(std::move(cfg)), embedder_(std::move(embedder)), llm_(std::move(llm)) {
    cfg_.validate();
    if (!embedder_ || !llm_) throw InvalidConfig("runner needs an embedder and an LLM backend");
  }

  /// Runs every (seed, ratio, lambda, shots) cell. `corpus` overrides reading
  /// `corpus_path` when given.
  RunManifest run(const std::vector<Record>* corpus = nullptr) {
    std::vector<Record> loaded;
    if (!corpus) {
      loaded = load_corpus(cfg_.corpus_path);
      corpus = &loaded;
    }
    std::unordered_map<std::string, const Record*> by_id;
    for (const Record& r : *corpus) by_id.emplace(r.id, &r);

    namespace fs = std::filesystem;
    const fs::path out = cfg_.output_dir;
    fs::create_directories(out);
    CompletionCache cache(out / "completions_cache.jsonl");
    const std::string model = llm_->identity();

    RunManifest manifest;
    manifest.config = config_to_json(cfg_);
    detail::write_text(out / "config.json", manifest.config.dump(2) + "\n");

    for (std::int64_t seed : cfg_.seeds) {
      for (double ratio : cfg_.seen_ratios) {
        const Split split = make_split(*corpus, seed, ratio);
        const fs::path split_path =
            out / "splits" / ("seed" + std::to_string(seed) + "_ratio" + format_number(ratio) + ".json");
        detail::write_text(split_path, split_to_json(split).dump(2) + "\n");

        std::vector<const Record*> train, test;
        for (const auto& id : split.train_ids) train.push_back(by_id.at(id));
        for (const auto& id : split.test_ids) test.push_back(by_id.at(id));
        auto [case_pool, template_pool] = build_pools(train, cfg_.dedup_templates);
        fill_embeddings(case_pool);
        fill_embeddings(template_pool);

        for (double lambda : cfg_.lambdas) {
          for (const std::string& shots : cfg_.shots) {
            CellResult cell = run_cell(model, seed, ratio, lambda, shots, test, case_pool, template_pool, cache);
            cell.split_path = split_path;
            manifest.cells.push_back(std::move(cell));
          }
        }
      }
    }

    manifest.aggregate_path = out / "aggregate.json";
    detail::write_text(manifest.aggregate_path, aggregate_report(manifest).dump(2) + "\n");
    manifest.manifest_path = out / "manifest.json";
    detail::write_text(manifest.manifest_path, manifest_to_json(manifest, out).dump(2) + "\n");
    return manifest;
  }

  /// Per (ratio, lambda, shots) aggregate across seeds.
  static nlohmann::json aggregate_report(const RunManifest& m) {
    struct Group {
      std::vector<SampleScore> scores;
      std::vector<std::int64_t> seeds;
    };
    std::map<std::tuple<std::string, double, double, std::string>, Group> groups;
    for (const CellResult& c : m.cells) {
      std::ifstream in(c.scores_path);
      std::string line;
      auto& g = groups[{c.model, c.ratio, c.lambda, c.shots}];
      while (std::getline(in, line)) {
        g.scores.push_back(nlohmann::json::parse(line).get<SampleScore>());
        g.seeds.push_back(c.seed);
      }
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, g] : groups) {
      if (g.scores.empty()) continue;
      nlohmann::json agg;
      to_json(agg, aggregate(g.scores, g.seeds));
      rows.push_back({{"model", std::get<0>(key)},
                      {"ratio", std::get<1>(key)},
                      {"lambda", std::get<2>(key)},
                      {"shots", std::get<3>(key)},
                      {"aggregate", agg}});
    }
    return {{"rows", rows}};
  }

 private:
  void fill_embeddings(Pool& pool) {
    if (!pool.empty()) pool.ensure_embeddings(*embedder_);
  }

  struct SampleOutcome {
    std::string prompt;
    std::string prompt_sha256;
    std::string completion;
    std::string error;
    SampleScore score;
    std::optional<double> pairwise;
    bool reused = false;
  };

  CellResult run_cell(const std::string& model, std::int64_t seed, double ratio, double lambda, const std::string& shots,
                      const std::vector<const Record*>& test, const Pool& case_pool, const Pool& template_pool,
                      CompletionCache& cache) {
    namespace fs = std::filesystem;
    auto [n, m] = parse_shots_label(shots);
    HybridConfig hcfg{n, m, lambda, cfg_.boundary_size, cfg_.scope, false};
    PromptLayout layout;
    layout.include_skeleton_block = cfg_.include_skeleton_block;

    std::vector<SampleOutcome> outcomes(test.size());
    detail::parallel_for(test.size(), cfg_.concurrency, [&](std::size_t i) {
      const Record& rec = *test[i];
      SampleOutcome& o = outcomes[i];
      try {
        SelectedSet s = select_for(rec, case_pool, template_pool, hcfg);
        if (s.size() >= 2) o.pairwise = diversity_report(s, *embedder_).mean_pairwise_sim;
        o.prompt = build_prompt(LegalCase{rec.case_text, std::nullopt}, s, layout);
        o.prompt_sha256 = sha256_hex(o.prompt);
        const std::string key = CompletionCache::key(model, o.prompt);
        if (auto hit = cache.find(key)) {
          o.completion = *hit;
          o.reused = true;
        } else {
          GenerationConfig gen = cfg_.generation;
          if (!gen.seed) gen.seed = seed;
          o.completion = llm_->generate({o.prompt, rec.id}, gen);
          cache.put(key, o.completion);
        }
        o.score = score_sample(rec.id, extract_output(o.completion), rec.facts, *embedder_, cfg_.soft_averaging);
      } catch (const Error& e) {
        o.error = e.kind() + ": " + e.what();
        o.score = failed_score(rec.id);
      }
    });

    CellResult cell;
    cell.model = model;
    cell.seed = seed;
    cell.ratio = ratio;
    cell.lambda = lambda;
    cell.shots = shots;
    const fs::path dir = fs::path(cfg_.output_dir) / "cells" /
                         (detail::sanitize(model) + "__seed" + std::to_string(seed) + "_ratio" + format_number(ratio) +
                          "_lambda" + format_number(lambda) + "_" + detail::sanitize(shots));
    cell.prompts_path = dir / "prompts.jsonl";
    cell.completions_path = dir / "completions.jsonl";
    cell.scores_path = dir / "scores.jsonl";

    std::string prompts, completions, scores;
    std::vector<SampleScore> all;
    double pairwise_sum = 0.0;
    std::size_t pairwise_n = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const SampleOutcome& o = outcomes[i];
      prompts += nlohmann::json{{"id", test[i]->id}, {"prompt_sha256", o.prompt_sha256}, {"prompt", o.prompt}}.dump() + "\n";
      nlohmann::json c = {{"id", test[i]->id}, {"prompt_sha256", o.prompt_sha256}, {"completion", o.completion}};
      if (!o.error.empty()) c["error"] = o.error;
      completions += c.dump() + "\n";
      nlohmann::json sj;
      to_json(sj, o.score);
      scores += sj.dump() + "\n";
      all.push_back(o.score);
      if (o.pairwise) {
        pairwise_sum += *o.pairwise;
        ++pairwise_n;
      }
      (o.reused ? cell.reused : cell.generated) += o.error.empty() ? 1 : 0;
    }
    detail::write_text(cell.prompts_path, prompts);
    detail::write_text(cell.completions_path, completions);
    detail::write_text(cell.scores_path, scores);
    cell.aggregate = aggregate(all, std::vector<std::int64_t>(all.size(), seed));
    if (pairwise_n) cell.mean_pairwise_sim = pairwise_sum / static_cast<double>(pairwise_n);
    return cell;
  }

  SelectedSet select_for(const Record& query, const Pool& case_pool, const Pool& template_pool,
                         const HybridConfig& hcfg) {
    if (cfg_.exclude_query_from_pools) {
      auto contains = [&](const Pool& p) {
        return std::any_of(p.items().begin(), p.items().end(), [&](const Demonstration& d) { return d.id == query.id; });
      };
      if (contains(case_pool)) {
        std::vector<Demonstration> kept;
        for (const Demonstration& d : case_pool.items()) {
          if (d.id != query.id) kept.push_back(d);
        }
        return select_hybrid(query.case_text, Pool(DemoKind::Case, std::move(kept)), template_pool, hcfg, *embedder_);
      }
    }
    return select_hybrid(query.case_text, case_pool, template_pool, hcfg, *embedder_);
  }

  ExperimentConfig cfg_;
  std::shared_ptr<Embedder> embedder_;
  std::shared_ptr<LlmBackend> llm_;
};

/// Long-format CSV over one or more run manifests: one row per cell, then one
/// `mean` row per (model, ratio, lambda, shots) group.
inline std::string report_csv(const std::vector<std::filesystem::path>& manifests) {
  if (manifests.empty()) throw MissingManifest("no manifests given");
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  struct Acc {
    double exact = 0, soft = 0, pairwise = 0;
    std::size_t n = 0, pairwise_n = 0;
  };
  std::vector<std::tuple<std::string, double, double, std::string>> order;
  std::map<std::tuple<std::string, double, double, std::string>, Acc> groups;

  std::ostringstream csv;
  csv << "model,seed,ratio,lambda,shots,exact_acc,soft_acc,mean_pairwise_sim\n";
  for (const auto& path : manifests) {
    std::ifstream in(path);
    if (!in) throw MissingManifest("manifest not found: " + path.string());
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw MissingManifest("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    for (const auto& c : m.at("cells")) {
      const std::string model = c.at("model").get<std::string>();
      const double ratio = c.at("ratio").get<double>();
      const double lambda = c.at("lambda").get<double>();
      const std::string shots = c.at("shots").get<std::string>();
      const double exact = c.at("exact_acc").get<double>();
      const double soft = c.at("soft_acc").get<double>();
      const auto& pw = c.at("mean_pairwise_sim");
      csv << model << ',' << c.at("seed").get<std::int64_t>() << ',' << format_number(ratio) << ','
          << format_number(lambda) << ',' << shots << ',' << num(exact) << ',' << num(soft) << ','
          << (pw.is_null() ? std::string() : num(pw.get<double>())) << '\n';
      auto key = std::make_tuple(model, ratio, lambda, shots);
      if (!groups.count(key)) order.push_back(key);
      Acc& a = groups[key];
      a.exact += exact;
      a.soft += soft;
      ++a.n;
      if (!pw.is_null()) {
        a.pairwise += pw.get<double>();
        ++a.pairwise_n;
      }
    }
  }
  for (const auto& key : order) {
    const Acc& a = groups.at(key);
    csv << std::get<0>(key) << ",mean," << format_number(std::get<1>(key)) << ',' << format_number(std::get<2>(key))
        << ',' << std::get<3>(key) << ',' << num(a.exact / static_cast<double>(a.n)) << ','
        << num(a.soft / static_cast<double>(a.n)) << ','
        << (a.pairwise_n ? num(a.pairwise / static_cast<double>(a.pairwise_n)) : std::string()) << '\n';
  }
  return csv.str();
}

}  // namespace lexicl
