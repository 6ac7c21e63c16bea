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
#include <optional>
#include <string>
#include <vector>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/profiles/profiles.hpp"
#include "epiaudit/stats/descriptive.hpp"
#include "epiaudit/stats/divergence.hpp"
#include "epiaudit/stats/effect_size.hpp"
#include "epiaudit/stats/kruskal_wallis.hpp"

namespace epiaudit {

// One title present (and profiled) on both platforms.
struct ArticleDivergence {
  std::string title;
  std::optional<TopicCategory> topic;
  double jsd = 0.0;
  double cosine = 0.0;
  double entropy_wikipedia = 0.0;
  double entropy_grokipedia = 0.0;

  double entropy_diff() const { return entropy_grokipedia - entropy_wikipedia; }
};

// Pairs profiles by title; titles profiled on only one platform are skipped.
// Output is sorted by title.
inline std::vector<ArticleDivergence> article_divergences(const std::vector<EpistemicProfile>& profiles) {
  std::map<std::string, const EpistemicProfile*> wiki, grok;
  for (const auto& p : profiles) (p.platform == Platform::kWikipedia ? wiki : grok)[p.title] = &p;
  std::vector<ArticleDivergence> out;
  for (const auto& [title, w] : wiki) {
    const auto it = grok.find(title);
    if (it == grok.end()) continue;
    const EpistemicProfile* g = it->second;
    ArticleDivergence d;
    d.title = title;
    d.topic = w->topic ? w->topic : g->topic;
    d.jsd = stats::jensen_shannon_divergence(w->proportions, g->proportions);
    d.cosine = stats::cosine_similarity(w->proportions, g->proportions);
    d.entropy_wikipedia = stats::shannon_entropy(w->proportions);
    d.entropy_grokipedia = stats::shannon_entropy(g->proportions);
    out.push_back(d);
  }
  return out;
}

// JSD descending (most divergent first) or ascending; ties broken by title.
inline std::vector<ArticleDivergence> rank_by_jsd(std::vector<ArticleDivergence> rows, bool descending,
                                                  std::size_t k) {
  std::sort(rows.begin(), rows.end(), [&](const ArticleDivergence& a, const ArticleDivergence& b) {
    if (a.jsd != b.jsd) return descending ? a.jsd > b.jsd : a.jsd < b.jsd;
    return a.title < b.title;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

// Effect size or the reason it could not be computed.
struct EffectOutcome {
  std::optional<stats::EffectSize> effect;
  std::string error;
};

inline EffectOutcome try_paired_d(const std::vector<double>& diffs) {
  EffectOutcome out;
  try {
    out.effect = stats::paired_cohens_d(diffs);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

struct TopicSummary {
  TopicCategory topic = TopicCategory::kGeographic;
  std::size_t n = 0;
  double mean_jsd = 0.0;
  double mean_cosine = 0.0;
  double mean_entropy_wikipedia = 0.0;
  double mean_entropy_grokipedia = 0.0;
  EffectOutcome entropy_effect;  // paired, Grokipedia minus Wikipedia
};

struct TopicMetrics {
  std::size_t paired_articles = 0;
  double mean_jsd = 0.0;
  double mean_cosine = 0.0;
  std::map<Platform, double> mean_entropy;
  std::vector<TopicSummary> topics;  // topics with at least one paired article
  EffectOutcome overall_entropy_effect;
  std::optional<stats::HTestResult> jsd_by_topic;
  std::string jsd_by_topic_error;
};

inline TopicMetrics topic_metrics(const std::vector<ArticleDivergence>& rows) {
  TopicMetrics m;
  m.paired_articles = rows.size();
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "no article is profiled on both platforms");
  std::vector<double> jsd, cosine, ew, eg, diffs;
  for (const auto& r : rows) {
    jsd.push_back(r.jsd);
    cosine.push_back(r.cosine);
    ew.push_back(r.entropy_wikipedia);
    eg.push_back(r.entropy_grokipedia);
    diffs.push_back(r.entropy_diff());
  }
  m.mean_jsd = stats::mean(jsd);
  m.mean_cosine = stats::mean(cosine);
  m.mean_entropy[Platform::kWikipedia] = stats::mean(ew);
  m.mean_entropy[Platform::kGrokipedia] = stats::mean(eg);
  m.overall_entropy_effect = try_paired_d(diffs);

  std::vector<std::vector<double>> groups;
  for (TopicCategory t : kAllTopics) {
    std::vector<double> tj, tc, tw, tg, td;
    for (const auto& r : rows) {
      if (r.topic != t) continue;
      tj.push_back(r.jsd);
      tc.push_back(r.cosine);
      tw.push_back(r.entropy_wikipedia);
      tg.push_back(r.entropy_grokipedia);
      td.push_back(r.entropy_diff());
    }
    if (tj.empty()) continue;
    TopicSummary s;
    s.topic = t;
    s.n = tj.size();
    s.mean_jsd = stats::mean(tj);
    s.mean_cosine = stats::mean(tc);
    s.mean_entropy_wikipedia = stats::mean(tw);
    s.mean_entropy_grokipedia = stats::mean(tg);
    s.entropy_effect = try_paired_d(td);
    m.topics.push_back(s);
    groups.push_back(tj);
  }
  try {
    m.jsd_by_topic = stats::kruskal_wallis(groups);
  } catch (const Error& e) {
    m.jsd_by_topic_error = e.what();
  }
  return m;
}

// -- serialization ------------------------------------------------------------------

inline Json to_json(const EffectOutcome& e) {
  if (e.effect) return to_json(*e.effect);
  return Json{{"error", e.error}};
}

inline Json to_json(const TopicMetrics& m) {
  Json topics = Json::object();
  for (const auto& s : m.topics) {
    topics[std::string(to_string(s.topic))] = Json{{"n", s.n},
                                                   {"mean_jsd", s.mean_jsd},
                                                   {"mean_cosine", s.mean_cosine},
                                                   {"mean_entropy_wikipedia", s.mean_entropy_wikipedia},
                                                   {"mean_entropy_grokipedia", s.mean_entropy_grokipedia},
                                                   {"entropy_effect", to_json(s.entropy_effect)}};
  }
  Json entropy = Json::object();
  for (const auto& [p, v] : m.mean_entropy) entropy[std::string(to_string(p))] = v;
  Json j{{"paired_articles", m.paired_articles},
         {"mean_jsd", m.mean_jsd},
         {"mean_cosine", m.mean_cosine},
         {"mean_entropy", entropy},
         {"topics", topics},
         {"overall_entropy_effect", to_json(m.overall_entropy_effect)}};
  j["jsd_kruskal_wallis"] = m.jsd_by_topic ? to_json(*m.jsd_by_topic) : Json{{"error", m.jsd_by_topic_error}};
  return j;
}

inline Json to_json(const ArticleDivergence& d) {
  return Json{{"title", d.title},
              {"topic_category", d.topic ? Json(std::string(to_string(*d.topic))) : Json(nullptr)},
              {"jsd", d.jsd},
              {"cosine", d.cosine}};
}

inline std::string divergence_csv(const std::vector<ArticleDivergence>& rows) {
  std::string out = csv::row({"title", "topic", "jsd", "cosine"});
  for (const auto& r : rows) {
    out += csv::row({r.title, r.topic ? std::string(to_string(*r.topic)) : "", format_number(r.jsd),
                     format_number(r.cosine)});
  }
  return out;
}

}  // namespace epiaudit
