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

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epiaudit/acquisition/cache.hpp"
#include "epiaudit/acquisition/fetcher.hpp"
#include "epiaudit/acquisition/http.hpp"
#include "epiaudit/acquisition/manifest.hpp"
#include "epiaudit/core/digest.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/parallel.hpp"
#include "epiaudit/metrics/topic_metrics.hpp"
#include "epiaudit/networks/article_graph.hpp"
#include "epiaudit/networks/category_graph.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/parsing/parser.hpp"
#include "epiaudit/pipeline/config.hpp"
#include "epiaudit/profiles/profiles.hpp"
#include "epiaudit/scaling/scaling.hpp"
#include "epiaudit/taxonomy/classifier.hpp"
#include "epiaudit/taxonomy/llm_client.hpp"
#include "epiaudit/taxonomy/prompt.hpp"
#include "epiaudit/taxonomy/resolver.hpp"

namespace epiaudit {

// Where every stage reads and writes, relative to the output dir.
struct OutputLayout {
  fs::path root;

  fs::path manifest() const { return root / "manifest.json"; }
  fs::path parsed_dir() const { return root / "parsed"; }
  fs::path parse_report() const { return root / "parse_report.json"; }
  fs::path corpus_csv() const { return root / "corpus.csv"; }
  fs::path classifications() const { return root / "classifications.jsonl"; }
  fs::path classify_report() const { return root / "classify_report.json"; }
  fs::path profiles() const { return root / "profiles.jsonl"; }
  fs::path global_profile() const { return root / "global_profile.json"; }
  fs::path descriptive_stats() const { return root / "descriptive_stats.json"; }
  fs::path category_means_csv() const { return root / "category_means.csv"; }
  fs::path metrics_dir() const { return root / "metrics"; }
  fs::path topic_metrics() const { return metrics_dir() / "topic_metrics.json"; }
  fs::path divergence_csv() const { return metrics_dir() / "divergence.csv"; }
  fs::path networks_dir() const { return root / "networks"; }
  fs::path networks() const { return networks_dir() / "networks.json"; }
  fs::path scaling_dir() const { return root / "scaling"; }
  fs::path scaling() const { return scaling_dir() / "scaling.json"; }
  fs::path agreement() const { return root / "agreement.json"; }
  fs::path report() const { return root / "report.json"; }
  fs::path summary() const { return root / "summary.txt"; }
  fs::path llm_log() const { return root / "llm_audit.jsonl"; }
};

struct PipelineDeps {
  std::shared_ptr<HttpTransport> transport;  // null: a real HTTP transport is created on demand
  LlmClient* client = nullptr;               // replaces the configured endpoint when set
};

namespace pipeline_detail {

inline std::shared_ptr<HttpTransport> transport(const AuditConfig& cfg, PipelineDeps& deps) {
  if (!deps.transport) deps.transport = std::make_shared<HttplibTransport>(cfg.fetch.timeout);
  return deps.transport;
}

inline Json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "missing stage input " + path.string());
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path& path, const Json& j) { atomic_write(path, canonical_dump(j)); }

// Strips the "CODE: " prefix that Error adds to its message.
inline std::string bare_message(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

inline Json error_json(const Error& e) {
  return Json{{"error", std::string(to_string(e.code()))}, {"message", bare_message(e)}};
}

inline std::map<std::string, TopicCategory> topic_map(const PairManifest& m) {
  std::map<std::string, TopicCategory> out;
  for (const auto& e : m.entries) out[e.topic.title] = e.topic.category;
  return out;
}

// Digest of the parsed snapshot: every (platform, title, source hash)
// triple, sorted, so it does not depend on topic-file order.
inline std::string snapshot_digest(const std::vector<ParsedArticle>& articles) {
  std::vector<std::string> lines;
  for (const auto& a : articles) {
    lines.push_back(std::string(to_string(a.platform)) + "\t" + a.title + "\t" + a.source_hash + "\n");
  }
  std::sort(lines.begin(), lines.end());
  std::string all;
  for (const auto& l : lines) all += l;
  return sha256_hex(all);
}

inline std::string platform_file(Platform p, std::string_view suffix) {
  return std::string(dir_name(p)) + "_" + std::string(suffix);
}

}  // namespace pipeline_detail

// Reports a stage failure with the stage name in front of the message.
template <class Fn>
auto run_stage(Stage stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "stage " + std::string(to_string(stage)) + ": " + pipeline_detail::bare_message(e));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, "stage " + std::string(to_string(stage)) + ": " + e.what());
  }
}

// -- stage inputs shared by several stages ---------------------------------------------

inline std::string load_snapshot_digest(const OutputLayout& out) {
  return pipeline_detail::read_json(out.parse_report()).at("snapshot_digest").get<std::string>();
}

// Parsed articles listed in the parse report, in its order.
inline std::vector<ParsedArticle> load_parsed_corpus(const OutputLayout& out) {
  const Json report = pipeline_detail::read_json(out.parse_report());
  std::vector<ParsedArticle> articles;
  for (const auto& e : report.at("parsed")) {
    articles.push_back(load_parsed_article(out.parsed_dir(), parse_platform(e.at("platform").get<std::string>()),
                                           e.at("title").get<std::string>()));
  }
  return articles;
}

inline std::vector<EpistemicProfile> load_profiles(const OutputLayout& out) {
  if (!fs::exists(out.profiles())) throw Error(ErrorCode::kIo, "missing stage input " + out.profiles().string());
  std::vector<EpistemicProfile> profiles;
  for (const auto& line : split(read_file(out.profiles()), '\n')) {
    if (trim(line).empty()) continue;
    profiles.push_back(profile_from_json(Json::parse(line)));
  }
  return profiles;
}

// -- fetch --------------------------------------------------------------------------------

inline PairManifest stage_fetch(const AuditConfig& cfg, PipelineDeps& deps) {
  const OutputLayout out{cfg.output_dir};
  const auto topics = load_topics(cfg.topics_file);
  std::vector<std::string> titles;
  for (const auto& t : topics) titles.push_back(t.title);
  const FetchResults results =
      fetch_corpus(titles, cfg.cache_dir, cfg.fetch, *pipeline_detail::transport(cfg, deps), cfg.max_concurrency);
  PairManifest manifest = build_pair_manifest(topics, results);
  write_manifest(out.manifest(), manifest);
  return manifest;
}

// -- parse --------------------------------------------------------------------------------

inline Json stage_parse(const AuditConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  const PairManifest manifest = load_manifest(out.manifest());
  std::vector<std::pair<std::string, Platform>> jobs;
  for (const auto& t : manifest.eligible_topics()) {
    for (Platform p : kAllPlatforms) jobs.emplace_back(t.title, p);
  }
  std::vector<std::optional<ParsedArticle>> parsed(jobs.size());
  std::vector<std::string> failures(jobs.size());
  bounded_parallel_for(jobs.size(), cfg.max_concurrency, [&](std::size_t i) {
    const RawDocument doc = load_cached(jobs[i].first, jobs[i].second, cfg.cache_dir);
    try {
      parsed[i] = parse_article(doc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kContentRootMissing && e.code() != ErrorCode::kParse) throw;
      failures[i] = e.what();
    }
  });

  std::vector<ParsedArticle> articles;
  Json listed = Json::array(), failed = Json::array(), no_refs = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Json key{{"title", jobs[i].first}, {"platform", std::string(to_string(jobs[i].second))}};
    if (!parsed[i]) {
      Json f = key;
      f["error"] = failures[i];
      failed.push_back(f);
      continue;
    }
    write_parsed_article(out.parsed_dir(), *parsed[i]);
    listed.push_back(key);
    if (parsed[i]->no_references()) no_refs.push_back(key);
    articles.push_back(std::move(*parsed[i]));
  }
  atomic_write(out.corpus_csv(), corpus_csv(articles));
  Json report{{"snapshot_digest", pipeline_detail::snapshot_digest(articles)},
              {"parsed", listed},
              {"failed", failed},
              {"no_references", no_refs}};
  pipeline_detail::write_json(out.parse_report(), report);
  return report;
}

// -- classify -----------------------------------------------------------------------------

inline std::vector<HumanOverride> load_overrides(const fs::path& path) {
  std::vector<HumanOverride> out;
  for (const auto& line : split(read_file(path), '\n')) {
    if (trim(line).empty()) continue;
    const Json j = Json::parse(line);
    out.push_back({j.at("title").get<std::string>(), parse_platform(j.at("platform").get<std::string>()),
                   j.at("citation_index").get<std::size_t>(), parse_category(j.at("category").get<std::string>())});
  }
  return out;
}

inline std::vector<CitationLabel> stage_classify(const AuditConfig& cfg, PipelineDeps& deps) {
  const OutputLayout out{cfg.output_dir};
  const std::vector<ParsedArticle> articles = load_parsed_corpus(out);

  std::optional<PromptAsset> asset;
  if (!cfg.manual_file.empty()) asset = load_prompt_asset(cfg.manual_file);

  std::unique_ptr<WorkResolver> resolver;
  if (!cfg.resolver_fixture.empty()) {
    resolver = std::make_unique<FixtureResolver>(
        FixtureResolver::from_json(pipeline_detail::read_json(cfg.resolver_fixture)));
  } else {
    resolver = std::make_unique<CacheResolver>(cfg.cache_dir, cfg.fetch, pipeline_detail::transport(cfg, deps));
  }

  std::unique_ptr<LlmClient> owned;
  LlmClient* client = deps.client;
  if (!client && cfg.classifier != ClassifierMode::kRules) {
    if (cfg.fetch.offline) {
      throw Error(ErrorCode::kConfig, "offline mode cannot reach the LLM endpoint; use the rules classifier");
    }
    LlmEndpoint endpoint = cfg.llm;
    if (endpoint.audit_log.empty()) endpoint.audit_log = out.llm_log();
    owned = std::make_unique<HttpLlmClient>(endpoint, pipeline_detail::transport(cfg, deps));
    client = owned.get();
  }
  if (cfg.classifier == ClassifierMode::kRules) client = nullptr;

  ClassifierOptions options;
  options.mode = cfg.classifier;
  options.max_retries = cfg.max_retries;
  options.max_look_through = cfg.max_look_through;
  options.asset = asset ? &*asset : nullptr;
  const auto overrides = cfg.overrides_file.empty() ? std::vector<HumanOverride>{} : load_overrides(cfg.overrides_file);

  const auto labels = classify_corpus(articles, *resolver, client, options, cfg.max_inflight, overrides);
  const std::string jsonl = labels_to_jsonl(labels);
  atomic_write(out.classifications(), jsonl);

  std::size_t unresolved = 0;
  for (const auto& l : labels) unresolved += l.result ? 0 : 1;
  pipeline_detail::write_json(
      out.classify_report(),
      Json{{"snapshot_digest", load_snapshot_digest(out)},
           {"classifier", std::string(to_string(cfg.classifier))},
           {"model", client ? client->model_name() : ""},
           {"prompt_version", asset ? asset->version : ""},
           {"prompt_digest", asset ? asset->digest : ""},
           {"labels", labels.size()},
           {"unresolvable", unresolved},
           {"labels_digest", sha256_hex(jsonl)}});
  return labels;
}

// -- profile ------------------------------------------------------------------------------

inline ProfileSet stage_profile(const AuditConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  const std::vector<ParsedArticle> articles = load_parsed_corpus(out);
  if (!fs::exists(out.classifications())) {
    throw Error(ErrorCode::kIo, "missing stage input " + out.classifications().string());
  }
  const auto labels = labels_from_jsonl(read_file(out.classifications()));
  const auto topics = pipeline_detail::topic_map(load_manifest(out.manifest()));
  const ProfileSet set = build_profiles(articles, labels, topics);
  const std::string digest = load_snapshot_digest(out);

  atomic_write(out.profiles(), profiles_to_jsonl(set));
  Json global{{"snapshot_digest", digest}};
  for (Platform p : kAllPlatforms) {
    try {
      global[std::string(to_string(p))] = to_json(global_profile(set, p));
    } catch (const Error& e) {
      global[std::string(to_string(p))] = pipeline_detail::error_json(e);
    }
  }
  pipeline_detail::write_json(out.global_profile(), global);

  const DescriptiveStats stats = descriptive_stats(articles, set);
  Json empty = Json::array();
  for (const auto& k : set.empty_articles) {
    empty.push_back(Json{{"title", k.title}, {"platform", std::string(to_string(k.platform))}});
  }
  pipeline_detail::write_json(out.descriptive_stats(),
                              Json{{"snapshot_digest", digest}, {"platforms", to_json(stats)}, {"empty_articles", empty}});
  atomic_write(out.category_means_csv(), category_means_csv(stats));
  return set;
}

// -- metrics ------------------------------------------------------------------------------

inline Json stage_metrics(const AuditConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  const auto rows = article_divergences(load_profiles(out));
  fs::create_directories(out.metrics_dir());
  atomic_write(out.divergence_csv(), divergence_csv(rows));
  Json articles = Json::array();
  for (const auto& r : rows) {
    Json a = to_json(r);
    a["entropy_wikipedia"] = r.entropy_wikipedia;
    a["entropy_grokipedia"] = r.entropy_grokipedia;
    articles.push_back(a);
  }
  Json j{{"snapshot_digest", load_snapshot_digest(out)}, {"articles", articles}};
  try {
    j["topics"] = to_json(topic_metrics(rows));
  } catch (const Error& e) {
    j["topics"] = pipeline_detail::error_json(e);
  }
  pipeline_detail::write_json(out.topic_metrics(), j);
  return j;
}

// -- analyze: networks and scaling --------------------------------------------------------

inline Json analyze_networks(const AuditConfig& cfg, const OutputLayout& out,
                             const std::vector<EpistemicProfile>& all) {
  using pipeline_detail::error_json;
  using pipeline_detail::platform_file;
  fs::create_directories(out.networks_dir());
  Json platforms = Json::object();
  Json sensitivity = Json::array();
  std::string sensitivity_csv = csv::row({"threshold", "platform", "r", "edges", "degenerate"});

  for (Platform p : kAllPlatforms) {
    std::vector<const EpistemicProfile*> profiles;
    for (const auto& pr : all) {
      if (pr.platform == p && pr.topic) profiles.push_back(&pr);
    }
    Json section;
    section["articles"] = profiles.size();

    const CategoryGraph co = co_occurrence_graph(profiles);
    atomic_write(out.networks_dir() / platform_file(p, "cooccurrence_edges.csv"), edges_csv(co.edges));
    Json cj{{"graph", to_json(co)}};
    try {
      cj["mean_weight"] = mean_edge_weight(co);
      const CategoryGraph backbone = mean_filter_backbone(co);
      cj["backbone"] = to_json(backbone);
      atomic_write(out.networks_dir() / platform_file(p, "backbone_edges.csv"), edges_csv(backbone.edges));
    } catch (const Error& e) {
      cj["backbone"] = error_json(e);
    }
    section["cooccurrence"] = cj;

    try {
      const CosineBackbone cb = category_cosine_backbone(profiles);
      Json constant = Json::array();
      for (auto c : cb.constant_columns) constant.push_back(std::string(to_string(c)));
      section["cosine_backbone"] = Json{{"mean_similarity", cb.mean_similarity},
                                        {"backbone", to_json(cb.backbone)},
                                        {"constant_columns", constant}};
      atomic_write(out.networks_dir() / platform_file(p, "cosine_backbone_edges.csv"), edges_csv(cb.backbone.edges));
    } catch (const Error& e) {
      section["cosine_backbone"] = error_json(e);
    }

    const ArticleGraph g = homophily_graph(profiles, cfg.homophily_threshold, cfg.max_concurrency);
    atomic_write(out.networks_dir() / platform_file(p, "homophily_edges.csv"), edges_csv(g));
    Json hj{{"threshold", g.threshold}, {"nodes", g.nodes.size()}, {"edges", g.edges.size()}};
    try {
      const auto r = assortativity(g);
      hj["assortativity"] = Json{{"r", r.r}, {"degenerate", r.degenerate}};
      const MixingMatrix mm = mixing_matrix(g);
      hj["mixing"] = to_json(mm);
      atomic_write(out.networks_dir() / platform_file(p, "mixing.csv"), mixing_csv(mm));
    } catch (const Error& e) {
      hj["assortativity"] = error_json(e);
    }
    section["homophily"] = hj;

    for (double t : cfg.sensitivity_thresholds) {
      const ArticleGraph gt = homophily_graph(profiles, t, cfg.max_concurrency);
      Json row{{"threshold", t}, {"platform", std::string(to_string(p))}, {"edges", gt.edges.size()}};
      try {
        const auto r = assortativity(gt);
        row["r"] = r.r;
        row["degenerate"] = r.degenerate;
        sensitivity_csv += csv::row({format_number(t), std::string(to_string(p)), format_number(r.r),
                                     std::to_string(gt.edges.size()), r.degenerate ? "true" : "false"});
      } catch (const Error& e) {
        row["r"] = nullptr;
        row["error"] = std::string(to_string(e.code()));
        sensitivity_csv += csv::row({format_number(t), std::string(to_string(p)), "",
                                     std::to_string(gt.edges.size()), ""});
      }
      sensitivity.push_back(row);
    }
    platforms[std::string(to_string(p))] = section;
  }
  atomic_write(out.networks_dir() / "assortativity_sensitivity.csv", sensitivity_csv);
  return Json{{"platforms", platforms}, {"assortativity_sensitivity", sensitivity}};
}

inline Json analyze_scaling(const AuditConfig& cfg, const OutputLayout& out,
                            const std::vector<ParsedArticle>& articles,
                            const std::map<std::string, TopicCategory>& topics) {
  fs::create_directories(out.scaling_dir());
  std::vector<CorpusRow> rows;
  for (const auto& a : articles) {
    CorpusRow r{a.title, a.platform, a.word_count, a.citations.size(), std::nullopt};
    if (auto it = topics.find(a.title); it != topics.end()) r.topic = it->second;
    rows.push_back(r);
  }
  atomic_write(out.scaling_dir() / "scatter.csv", scatter_csv(rows));

  Json platforms = Json::object();
  for (Platform p : kAllPlatforms) {
    std::vector<double> x, y;
    std::vector<CorpusRow> mine;
    for (const auto& r : rows) {
      if (r.platform != p) continue;
      x.push_back(static_cast<double>(r.words));
      y.push_back(static_cast<double>(r.citations));
      mine.push_back(r);
    }
    Json section{{"n", x.size()}};
    try {
      section["selection"] = to_json(select_scaling_model(x, y, cfg.alpha));
    } catch (const Error& e) {
      section["selection"] = pipeline_detail::error_json(e);
    }
    Json bins = Json::array();
    for (const auto& b : binned_density(mine, cfg.density_bin_words)) {
      bins.push_back(Json{{"lower", b.lower}, {"upper", b.upper}, {"n", b.n}, {"mean_density_per_1k", b.mean_density}});
    }
    section["density_bins"] = bins;
    platforms[std::string(to_string(p))] = section;
  }
  Json j{{"platforms", platforms}};
  try {
    const auto tables = rank_extremes_report(rows, cfg.extremes_k);
    Json ex = Json::array();
    for (const auto& t : tables) ex.push_back(to_json(t));
    j["extremes"] = ex;
    atomic_write(out.scaling_dir() / "extremes.csv", extremes_csv(tables));
  } catch (const Error& e) {
    j["extremes"] = pipeline_detail::error_json(e);
  }
  return j;
}

inline Json stage_analyze(const AuditConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  const std::string digest = load_snapshot_digest(out);
  const auto profiles = load_profiles(out);
  const auto articles = load_parsed_corpus(out);
  const auto topics = pipeline_detail::topic_map(load_manifest(out.manifest()));

  Json networks = analyze_networks(cfg, out, profiles);
  networks["snapshot_digest"] = digest;
  pipeline_detail::write_json(out.networks(), networks);
  Json scaling = analyze_scaling(cfg, out, articles, topics);
  scaling["snapshot_digest"] = digest;
  pipeline_detail::write_json(out.scaling(), scaling);
  return Json{{"networks", networks}, {"scaling", scaling}};
}

}  // namespace epiaudit
