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

#include <cstdio>
#include <string>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/pipeline/config.hpp"
#include "epiaudit/pipeline/stages.hpp"

namespace epiaudit {

// The report is kept as JSON: it is what gets emitted, and the round trip
// through parse is then the identity.
using AuditReport = Json;

// Collects every stage output into one document. Each numeric section
// carries the snapshot digest it was computed from; a section computed
// from a different snapshot than the current parse is rejected.
inline AuditReport build_report(const AuditConfig& cfg) {
  using pipeline_detail::read_json;
  const OutputLayout out{cfg.output_dir};
  const std::string digest = load_snapshot_digest(out);

  auto section = [&](const fs::path& path) {
    Json j = read_json(path);
    const std::string found = j.value("snapshot_digest", "");
    if (found != digest) {
      throw Error(ErrorCode::kDigestMismatch, path.string() + " was computed from snapshot " + found.substr(0, 12) +
                                                  ", current is " + digest.substr(0, 12) + "; rerun that stage");
    }
    return j;
  };

  const PairManifest manifest = load_manifest(out.manifest());
  const ManifestSummary ms = manifest.summary();
  const Json parse_report = read_json(out.parse_report());
  const Json classify = section(out.classify_report());

  Json profiles = Json::array();
  for (const auto& p : load_profiles(out)) profiles.push_back(to_json(p));

  AuditReport r;
  r["provenance"] = Json{{"tool_version", std::string(kToolVersion)},
                         {"prompt_version", classify.at("prompt_version")},
                         {"prompt_digest", classify.at("prompt_digest")},
                         {"classifier", classify.at("classifier")},
                         {"model", classify.at("model")},
                         {"labels_digest", classify.at("labels_digest")},
                         {"snapshot_digest", digest},
                         {"config", config_fingerprint(cfg)},
                         {"generated_at", utc_timestamp_now()}};
  r["manifest"] = Json{{"snapshot_digest", digest},
                       {"input", ms.input},
                       {"eligible", ms.eligible},
                       {"missing", ms.missing},
                       {"excluded", ms.excluded},
                       {"parsed_articles", parse_report.at("parsed").size()},
                       {"parse_failures", parse_report.at("failed")},
                       {"no_references", parse_report.at("no_references")}};
  r["classification"] = Json{{"snapshot_digest", digest},
                             {"labels", classify.at("labels")},
                             {"unresolvable", classify.at("unresolvable")}};
  r["descriptive_stats"] = section(out.descriptive_stats());
  r["global_profile"] = section(out.global_profile());
  r["profiles"] = Json{{"snapshot_digest", digest}, {"articles", profiles}};
  r["topic_metrics"] = section(out.topic_metrics());
  r["networks"] = section(out.networks());
  r["scaling"] = section(out.scaling());
  if (fs::exists(out.agreement())) r["agreement"] = read_json(out.agreement());
  return round_floats(r);
}

namespace report_detail {

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

inline std::string num(const Json& j, const char* format = "%.4f") {
  return j.is_number() ? fmt(format, j.get<double>()) : std::string("n/a");
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// Rows sorted by JSD, ties by title.
inline std::vector<Json> ranked(const Json& articles, bool descending, std::size_t k) {
  std::vector<Json> rows(articles.begin(), articles.end());
  std::sort(rows.begin(), rows.end(), [&](const Json& a, const Json& b) {
    const double ja = a.at("jsd").get<double>(), jb = b.at("jsd").get<double>();
    if (ja != jb) return descending ? ja > jb : ja < jb;
    return a.at("title").get<std::string>() < b.at("title").get<std::string>();
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

}  // namespace report_detail

inline constexpr std::size_t kSummaryExtremes = 8;

// Plain-text digest of the headline comparisons.
inline std::string render_summary(const AuditReport& r) {
  using report_detail::num;
  using report_detail::pad;
  std::string s;
  const Json& prov = r.at("provenance");
  s += "Epistemic citation audit\n";
  s += "tool " + prov.at("tool_version").get<std::string>() + ", classifier " +
       prov.at("classifier").get<std::string>();
  if (!prov.at("prompt_version").get<std::string>().empty()) {
    s += ", coding manual " + prov.at("prompt_version").get<std::string>();
  }
  s += "\nsnapshot " + prov.at("snapshot_digest").get<std::string>() + "\n\n";

  const Json& m = r.at("manifest");
  s += "Corpus: " + std::to_string(m.at("eligible").get<std::size_t>()) + " eligible pairs of " +
       std::to_string(m.at("input").get<std::size_t>()) + " topics (" +
       std::to_string(m.at("missing").get<std::size_t>()) + " missing, " +
       std::to_string(m.at("excluded").get<std::size_t>()) + " excluded)\n\n";

  s += pad("platform", 12) + pad("words", 22) + pad("citations", 20) + "density/1k\n";
  const Json& ds = r.at("descriptive_stats").at("platforms");
  for (auto it = ds.begin(); it != ds.end(); ++it) {
    const Json& d = it.value();
    auto ms = [&](const char* key) {
      return num(d.at(key).at("mean"), "%.1f") + " (sd " + num(d.at(key).at("sd"), "%.1f") + ")";
    };
    s += pad(it.key(), 12) + pad(ms("word_count"), 22) + pad(ms("citation_count"), 20) +
         num(d.at("density_per_1k").at("mean"), "%.2f") + "\n";
  }

  s += "\nGlobal profile (% of classified citations)\n";
  const Json& gp = r.at("global_profile");
  s += pad("category", 22) + pad("WIKIPEDIA", 12) + "GROKIPEDIA\n";
  for (EpistemicCategory c : kAllCategories) {
    const std::string key(to_string(c));
    s += pad(key, 22);
    for (const char* p : {"WIKIPEDIA", "GROKIPEDIA"}) {
      const Json& g = gp.at(p);
      const std::string v = g.contains("percent") ? percent_2dp(g.at("percent").at(key).get<double>()) : "n/a";
      s += std::string(p) == "WIKIPEDIA" ? pad(v, 12) : v;
    }
    s += "\n";
  }

  const Json& tm = r.at("topic_metrics");
  if (tm.at("topics").contains("mean_jsd")) {
    const Json& t = tm.at("topics");
    s += "\nDivergence: mean JSD " + num(t.at("mean_jsd")) + ", mean cosine " + num(t.at("mean_cosine")) + "\n";
    const Json& kw = t.at("jsd_kruskal_wallis");
    if (kw.contains("H")) {
      s += "JSD by topic, Kruskal-Wallis: H = " + num(kw.at("H"), "%.2f") + ", df = " +
           std::to_string(kw.at("df").get<int>()) + ", p = " + num(kw.at("p_value"), "%.4g") + "\n";
    }
    s += "Entropy (bits): WIKIPEDIA " + num(t.at("mean_entropy").at("WIKIPEDIA"), "%.3f") + ", GROKIPEDIA " +
         num(t.at("mean_entropy").at("GROKIPEDIA"), "%.3f") + "\n";
    s += "Paired entropy difference (Grokipedia - Wikipedia):\n";
    auto effect_line = [&](const std::string& label, const Json& e) {
      s += "  " + pad(label, 24);
      if (e.contains("d")) {
        s += pad("n=" + std::to_string(e.at("n").get<std::size_t>()), 6) + "mean " + num(e.at("mean_diff"), "%.2f") +
             " [" + num(e.at("ci_low"), "%.2f") + ", " + num(e.at("ci_high"), "%.2f") + "]  d=" +
             num(e.at("d"), "%.2f") + "\n";
      } else {
        s += e.value("error", std::string("n/a")) + "\n";
      }
    };
    for (auto it = t.at("topics").begin(); it != t.at("topics").end(); ++it) {
      effect_line(it.key(), it.value().at("entropy_effect"));
    }
    effect_line("OVERALL", t.at("overall_entropy_effect"));
  }
  const Json& articles = tm.at("articles");
  for (bool most : {true, false}) {
    s += std::string("\n") + (most ? "Most" : "Least") + " divergent articles\n";
    std::size_t rank = 1;
    for (const auto& a : report_detail::ranked(articles, most, kSummaryExtremes)) {
      const std::string topic = a.at("topic_category").is_null() ? "" : a.at("topic_category").get<std::string>();
      s += "  " + pad(std::to_string(rank++) + ".", 4) + pad(a.at("title").get<std::string>(), 44) + " " +
           pad(topic, 24) + num(a.at("jsd")) + "\n";
    }
  }

  s += "\nScaling (citations ~ words)\n";
  const Json& sc = r.at("scaling").at("platforms");
  for (auto it = sc.begin(); it != sc.end(); ++it) {
    const Json& sel = it.value().at("selection");
    s += "  " + pad(it.key(), 12);
    if (!sel.contains("selected")) {
      s += sel.value("error", std::string("n/a")) + "\n";
      continue;
    }
    const std::string kind = sel.at("selected").get<std::string>();
    for (const auto& f : sel.at("candidates")) {
      if (f.at("model") != kind) continue;
      s += kind + ", adj. R^2 " + num(f.at("r2_adj"), "%.3f");
      for (const auto& c : f.at("coefficients")) {
        if (c.at("name") == "x") s += ", slope " + num(c.at("estimate"), "%.5f");
      }
    }
    s += "\n";
  }

  s += "\nAssortativity by topic\n";
  for (const auto& row : r.at("networks").at("assortativity_sensitivity")) {
    s += "  threshold " + num(row.at("threshold"), "%.2f") + "  " + pad(row.at("platform").get<std::string>(), 12) +
         "r = " + num(row.at("r"), "%.3f") + "\n";
  }
  return s;
}

inline void emit_report(const AuditReport& r, const fs::path& output_dir) {
  const OutputLayout out{output_dir};
  atomic_write(out.report(), canonical_dump(r));
  atomic_write(out.summary(), render_summary(r));
}

inline AuditReport stage_report(const AuditConfig& cfg) {
  AuditReport r = build_report(cfg);
  emit_report(r, cfg.output_dir);
  return r;
}

// Runs stages first..last in order. Each stage reads only what earlier
// stages wrote, so a run can resume from any stage.
inline AuditReport run_pipeline(const AuditConfig& cfg, PipelineDeps deps = {}, Stage first = Stage::kFetch,
                                Stage last = Stage::kReport) {
  validate_config(cfg, first);
  fs::create_directories(cfg.output_dir);
  AuditReport report;
  for (Stage s : kAllStages) {
    if (s < first || s > last) continue;
    run_stage(s, [&] {
      switch (s) {
        case Stage::kFetch: stage_fetch(cfg, deps); break;
        case Stage::kParse: stage_parse(cfg); break;
        case Stage::kClassify: stage_classify(cfg, deps); break;
        case Stage::kProfile: stage_profile(cfg); break;
        case Stage::kMetrics: stage_metrics(cfg); break;
        case Stage::kAnalyze: stage_analyze(cfg); break;
        case Stage::kReport: report = stage_report(cfg); break;
      }
      return 0;
    });
  }
  return report;
}

}  // namespace epiaudit
