// Copyright 2026 The Epiaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the audit pipeline.
//
//   audit run --topics data/topics_top72.tsv --cache cache --out audit-out
//   audit classify --classifier rules        (resume from the parsed corpus)
//   audit agree --grid coders.csv --metric interval
//
// Settings can come from a key=value file (--config); flags override it.
// The LLM API key is only ever read from the environment variable named by
// --api-key-env.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epiaudit/epiaudit.hpp"

#ifndef EPIAUDIT_DATA_DIR
#define EPIAUDIT_DATA_DIR "data"
#endif

namespace {

using namespace epiaudit;

Stage parse_stage(const std::string& s) {
  for (Stage st : kAllStages) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::kConfig, "unknown stage '" + s + "'");
}

struct CliSettings {
  AuditConfig cfg;
  std::string classifier = "hybrid";
  int host_interval_ms = 1000;
  std::string from = "fetch";
  std::string to = "report";
  // agree
  std::string ref_labels, pred_labels, grid;
  std::string metric = "nominal";
};

void finish(CliSettings& s) {
  s.cfg.classifier = parse_classifier_mode(s.classifier);
  s.cfg.fetch.host_interval = std::chrono::milliseconds(s.host_interval_ms);
  if (s.cfg.manual_file.empty()) {
    const fs::path bundled = fs::path(EPIAUDIT_DATA_DIR) / "coding_manual.md";
    if (fs::is_regular_file(bundled)) s.cfg.manual_file = bundled;
  }
}

Json run_agree(const CliSettings& s) {
  Json out;
  if (!s.grid.empty()) {
    if (s.metric != "interval" && s.metric != "nominal") {
      throw Error(ErrorCode::kConfig, "--metric must be nominal or interval");
    }
    const AlphaMetric metric = s.metric == "interval" ? AlphaMetric::kInterval : AlphaMetric::kNominal;
    const LabelMatrix m = load_label_grid(s.grid);
    const AlphaResult a = krippendorff_alpha(m, metric);
    out["krippendorff_alpha"] = Json{{"metric", s.metric},
                                     {"alpha", a.alpha},
                                     {"observed_disagreement", a.observed_disagreement},
                                     {"expected_disagreement", a.expected_disagreement},
                                     {"pairable_items", a.pairable_items},
                                     {"pairable_values", a.pairable_values},
                                     {"no_variation", a.no_variation},
                                     {"items", m.items.size()},
                                     {"raters", m.raters}};
    std::cout << "alpha (" << s.metric << ") = " << a.alpha << " over " << a.pairable_items << " items\n";
  }
  if (!s.ref_labels.empty() || !s.pred_labels.empty()) {
    if (s.ref_labels.empty() || s.pred_labels.empty()) {
      throw Error(ErrorCode::kConfig, "agree needs both --ref and --pred");
    }
    const AgreementRun run = compare_label_tables(load_label_table(s.ref_labels), load_label_table(s.pred_labels));
    out["classifier_agreement"] = to_json(run);
    std::cout << "accuracy " << run.report.accuracy * 100.0 << "%, kappa " << run.report.kappa.kappa << " over "
              << run.report.n << " items\n";
  }
  if (out.is_null()) throw Error(ErrorCode::kConfig, "agree needs --grid or --ref/--pred");
  const OutputLayout layout{s.cfg.output_dir};
  if (fs::exists(layout.manifest()) && fs::exists(layout.parse_report())) {
    out["snapshot_digest"] = load_snapshot_digest(layout);
  }
  fs::create_directories(s.cfg.output_dir);
  atomic_write(layout.agreement(), canonical_dump(out));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CliSettings s;
  AuditConfig& c = s.cfg;
  std::string topics, cache = c.cache_dir.string(), out = c.output_dir.string(), manual, fixture, overrides;

  CLI::App app{"Citation-source audit of paired encyclopedia articles"};
  app.set_config("--config", "", "key=value settings file; flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--topics", topics, "topic list (CATEGORY<TAB>Title per line)");
  app.add_option("--cache", cache, "document cache directory")->capture_default_str();
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--manual", manual, "coding manual used as the prompt asset");
  app.add_option("--resolver-fixture", fixture, "JSON map from tertiary pages to the works they describe");
  app.add_option("--overrides", overrides, "JSONL human label overrides");
  app.add_option("--classifier", s.classifier, "rules, hybrid or llm")
      ->check(CLI::IsMember({"rules", "hybrid", "llm"}))
      ->capture_default_str();
  app.add_option("--model", c.llm.model, "model name sent to the endpoint")->capture_default_str();
  app.add_option("--llm-url", c.llm.base_url, "chat-completions base URL")->capture_default_str();
  app.add_option("--api-key-env", c.llm.api_key_env, "environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--max-inflight", c.max_inflight, "concurrent classifier requests")->capture_default_str();
  app.add_option("--max-concurrency", c.max_concurrency, "concurrent fetches")->capture_default_str();
  app.add_option("--host-interval-ms", s.host_interval_ms, "minimum gap between requests to one host")
      ->capture_default_str();
  app.add_flag("--refresh", c.fetch.refresh, "ignore cached documents and refetch");
  app.add_flag("--offline", c.fetch.offline, "never touch the network");
  app.add_option("--wikipedia-base", c.fetch.wikipedia_base)->capture_default_str();
  app.add_option("--grokipedia-base", c.fetch.grokipedia_base)->capture_default_str();
  app.add_option("--homophily", c.homophily_threshold, "homophily edge threshold")->capture_default_str();
  app.add_option("--sensitivity", c.sensitivity_thresholds, "thresholds for the sensitivity table")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "significance level")->capture_default_str();
  app.add_option("--extremes-k", c.extremes_k, "articles per extremes list")->capture_default_str();
  app.add_option("--density-bin", c.density_bin_words, "word-count bin width for density")->capture_default_str();
  app.add_option("--seed", c.seed, "recorded in provenance")->capture_default_str();
  app.add_option("--max-look-through", c.max_look_through)->capture_default_str();
  app.add_option("--max-retries", c.max_retries)->capture_default_str();

  struct StageCommand {
    CLI::App* cmd;
    Stage first, last;
  };
  std::vector<StageCommand> stage_cmds = {
      {app.add_subcommand("fetch", "download both versions of every topic into the cache"), Stage::kFetch,
       Stage::kFetch},
      {app.add_subcommand("parse", "extract body text and citations"), Stage::kParse, Stage::kParse},
      {app.add_subcommand("classify", "label every citation"), Stage::kClassify, Stage::kClassify},
      {app.add_subcommand("profile", "per-article and global profiles"), Stage::kProfile, Stage::kProfile},
      {app.add_subcommand("metrics", "divergence and topic statistics"), Stage::kMetrics, Stage::kMetrics},
      {app.add_subcommand("analyze", "divergence, networks and scaling"), Stage::kMetrics, Stage::kAnalyze},
      {app.add_subcommand("report", "assemble report.json and summary.txt"), Stage::kReport, Stage::kReport},
  };
  CLI::App* run = app.add_subcommand("run", "run all stages, or a range of them");
  run->add_option("--from", s.from, "first stage")->capture_default_str();
  run->add_option("--to", s.to, "last stage")->capture_default_str();
  CLI::App* agree = app.add_subcommand("agree", "agreement between label sets or coders");
  agree->add_option("--ref", s.ref_labels, "reference labels (CSV or JSONL)");
  agree->add_option("--pred", s.pred_labels, "predicted labels (CSV or JSONL)");
  agree->add_option("--grid", s.grid, "items x coders CSV for Krippendorff's alpha");
  agree->add_option("--metric", s.metric, "nominal or interval")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    c.topics_file = topics;
    c.cache_dir = cache;
    c.output_dir = out;
    c.manual_file = manual;
    c.resolver_fixture = fixture;
    c.overrides_file = overrides;
    finish(s);

    if (agree->parsed()) {
      run_agree(s);
      return 0;
    }
    Stage first = Stage::kFetch, last = Stage::kReport;
    if (run->parsed()) {
      first = parse_stage(s.from);
      last = parse_stage(s.to);
      if (last < first) throw Error(ErrorCode::kConfig, "--to comes before --from");
    }
    for (const auto& sc : stage_cmds) {
      if (sc.cmd->parsed()) {
        first = sc.first;
        last = sc.last;
      }
    }
    const auto t0 = std::chrono::steady_clock::now();
    run_pipeline(c, {}, first, last);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "done: " << to_string(first) << ".." << to_string(last) << " in " << secs << " s, outputs in "
              << c.output_dir.string() << "\n";
    if (last == Stage::kReport) std::cout << read_file(OutputLayout{c.output_dir}.summary());
    return 0;
  } catch (const Error& e) {
    std::cerr << "audit: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "audit: " << e.what() << "\n";
    return 1;
  }
}
