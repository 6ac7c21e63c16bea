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

#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/stats/descriptive.hpp"
#include "epiaudit/taxonomy/classifier.hpp"

namespace epiaudit {

struct EpistemicProfile {
  std::string title;
  Platform platform = Platform::kWikipedia;
  std::optional<TopicCategory> topic;
  CategoryCounts counts{};
  CategoryVector proportions{};

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline EpistemicProfile profile_from_counts(const CategoryCounts& counts) {
  EpistemicProfile p;
  p.counts = counts;
  const std::size_t total = p.total();
  if (total == 0) throw Error(ErrorCode::kEmptyArticle, "no classified citations");
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    p.proportions[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return p;
}

inline EpistemicProfile article_profile(const std::vector<EpistemicCategory>& labels) {
  CategoryCounts counts{};
  for (auto c : labels) ++counts[index_of(c)];
  return profile_from_counts(counts);
}

// -- corpus profiles ----------------------------------------------------------------

struct ArticleKey {
  std::string title;
  Platform platform;
  auto operator<=>(const ArticleKey&) const = default;
};

struct ProfileSet {
  std::vector<EpistemicProfile> profiles;  // articles with >= 1 classified citation
  std::vector<ArticleKey> empty_articles;  // EMPTY_ARTICLE: excluded from vector analyses
  std::map<Platform, std::size_t> classified;
  std::map<Platform, std::size_t> unresolvable;  // excluded from counts and totals
};

// Tallies classified citations per article. Articles keep the order of
// `articles`; UNRESOLVABLE labels are counted separately and left out.
inline ProfileSet build_profiles(const std::vector<ParsedArticle>& articles,
                                 const std::vector<CitationLabel>& labels,
                                 const std::map<std::string, TopicCategory>& topics) {
  std::map<ArticleKey, CategoryCounts> counts;
  ProfileSet set;
  for (Platform p : kAllPlatforms) {
    set.classified[p] = 0;
    set.unresolvable[p] = 0;
  }
  for (const auto& l : labels) {
    if (!l.result) {
      ++set.unresolvable[l.platform];
      continue;
    }
    ++set.classified[l.platform];
    ++counts[{l.title, l.platform}][index_of(l.result->category)];
  }
  for (const auto& a : articles) {
    const ArticleKey key{a.title, a.platform};
    const auto it = counts.find(key);
    if (it == counts.end()) {
      set.empty_articles.push_back(key);
      continue;
    }
    EpistemicProfile p = profile_from_counts(it->second);
    p.title = a.title;
    p.platform = a.platform;
    if (auto t = topics.find(a.title); t != topics.end()) p.topic = t->second;
    set.profiles.push_back(std::move(p));
  }
  return set;
}

inline std::vector<const EpistemicProfile*> profiles_for(const ProfileSet& set, Platform platform) {
  std::vector<const EpistemicProfile*> out;
  for (const auto& p : set.profiles) {
    if (p.platform == platform) out.push_back(&p);
  }
  return out;
}

// -- global profile -------------------------------------------------------------------

struct GlobalProfile {
  Platform platform = Platform::kWikipedia;
  CategoryCounts counts{};
  std::array<double, kCategoryCount> percent{};
  std::size_t total = 0;
};

// Proportions of the pooled counts, not an average over articles.
inline GlobalProfile global_profile_from_counts(Platform platform, const CategoryCounts& counts) {
  GlobalProfile g;
  g.platform = platform;
  g.counts = counts;
  for (auto c : counts) g.total += c;
  if (g.total == 0) throw Error(ErrorCode::kEmptyArticle, "platform corpus has no classified citations");
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    g.percent[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(g.total);
  }
  return g;
}

inline GlobalProfile global_profile(const ProfileSet& set, Platform platform) {
  CategoryCounts sum{};
  for (const auto* p : profiles_for(set, platform)) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) sum[i] += p->counts[i];
  }
  return global_profile_from_counts(platform, sum);
}

// Percentage as printed in tables: two decimals, round half away from zero.
inline std::string percent_2dp(double percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", percent);
  return buf;
}

// -- descriptive statistics ------------------------------------------------------------

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

struct PlatformDescriptives {
  Platform platform = Platform::kWikipedia;
  MeanSd word_count;
  MeanSd citation_count;
  MeanSd density_per_1k;  // articles with word_count > 0
  std::array<stats::MeanCi, kCategoryCount> category_mean{};  // mean proportion across articles
  std::size_t profiled_articles = 0;
  std::size_t unresolvable = 0;
  double unresolvable_rate = 0.0;
};

struct DescriptiveStats {
  std::vector<PlatformDescriptives> platforms;
};

namespace profiles_detail {
inline MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd m;
  m.n = v.size();
  if (v.empty()) return m;
  m.mean = stats::mean(v);
  m.sd = v.size() >= 2 ? stats::sample_sd(v) : 0.0;
  return m;
}
}  // namespace profiles_detail

inline DescriptiveStats descriptive_stats(const std::vector<ParsedArticle>& articles, const ProfileSet& set) {
  DescriptiveStats out;
  for (Platform platform : kAllPlatforms) {
    PlatformDescriptives d;
    d.platform = platform;
    std::vector<double> words, cites, density;
    for (const auto& a : articles) {
      if (a.platform != platform) continue;
      words.push_back(static_cast<double>(a.word_count));
      cites.push_back(static_cast<double>(a.citations.size()));
      if (auto dens = a.density_per_1k()) density.push_back(*dens);
    }
    d.word_count = profiles_detail::mean_sd(words);
    d.citation_count = profiles_detail::mean_sd(cites);
    d.density_per_1k = profiles_detail::mean_sd(density);
    const auto profiles = profiles_for(set, platform);
    d.profiled_articles = profiles.size();
    if (profiles.size() >= 2) {
      for (std::size_t c = 0; c < kCategoryCount; ++c) {
        std::vector<double> props;
        for (const auto* p : profiles) props.push_back(p->proportions[c]);
        d.category_mean[c] = stats::mean_ci(props);
      }
    }
    d.unresolvable = set.unresolvable.at(platform);
    const std::size_t labelled = d.unresolvable + set.classified.at(platform);
    d.unresolvable_rate = labelled ? static_cast<double>(d.unresolvable) / static_cast<double>(labelled) : 0.0;
    out.platforms.push_back(d);
  }
  return out;
}

// -- serialization ---------------------------------------------------------------------

inline Json category_object(const CategoryCounts& counts) {
  Json j = Json::object();
  for (EpistemicCategory c : kAllCategories) j[std::string(to_string(c))] = counts[index_of(c)];
  return j;
}

inline Json category_object(const CategoryVector& v) {
  Json j = Json::object();
  for (EpistemicCategory c : kAllCategories) j[std::string(to_string(c))] = v[index_of(c)];
  return j;
}

inline Json to_json(const EpistemicProfile& p) {
  return Json{{"title", p.title},
              {"platform", std::string(to_string(p.platform))},
              {"topic_category", p.topic ? Json(std::string(to_string(*p.topic))) : Json(nullptr)},
              {"counts", category_object(p.counts)},
              {"proportions", category_object(p.proportions)},
              {"total", p.total()}};
}

inline EpistemicProfile profile_from_json(const Json& j) {
  try {
    CategoryCounts counts{};
    for (EpistemicCategory c : kAllCategories) {
      counts[index_of(c)] = j.at("counts").at(std::string(to_string(c))).get<std::size_t>();
    }
    EpistemicProfile p = profile_from_counts(counts);
    p.title = j.at("title").get<std::string>();
    p.platform = parse_platform(j.at("platform").get<std::string>());
    if (!j.at("topic_category").is_null()) p.topic = parse_topic_category(j.at("topic_category").get<std::string>());
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad profile: ") + e.what());
  }
}

inline std::string profiles_to_jsonl(const ProfileSet& set) {
  std::string out;
  for (const auto& p : set.profiles) out += to_json(p).dump() + "\n";
  return out;
}

inline Json to_json(const GlobalProfile& g) {
  Json pct = Json::object();
  for (EpistemicCategory c : kAllCategories) pct[std::string(to_string(c))] = g.percent[index_of(c)];
  return Json{{"platform", std::string(to_string(g.platform))},
              {"counts", category_object(g.counts)},
              {"percent", pct},
              {"total", g.total}};
}

inline Json to_json(const MeanSd& m) { return Json{{"mean", m.mean}, {"sd", m.sd}, {"n", m.n}}; }

inline Json to_json(const DescriptiveStats& s) {
  Json out = Json::object();
  for (const auto& d : s.platforms) {
    Json j;
    j["word_count"] = to_json(d.word_count);
    j["citation_count"] = to_json(d.citation_count);
    j["density_per_1k"] = to_json(d.density_per_1k);
    j["profiled_articles"] = d.profiled_articles;
    j["unresolvable_citations"] = d.unresolvable;
    j["unresolvable_rate"] = d.unresolvable_rate;
    Json cats = Json::object();
    if (d.profiled_articles >= 2) {
      for (EpistemicCategory c : kAllCategories) {
        const auto& ci = d.category_mean[index_of(c)];
        cats[std::string(to_string(c))] =
            Json{{"mean", ci.mean}, {"sd", ci.sd}, {"ci_low", ci.low}, {"ci_high", ci.high}, {"n", ci.n}};
      }
    }
    j["category_mean_proportion"] = cats;
    out[std::string(to_string(d.platform))] = j;
  }
  return out;
}

// Bar-chart rows: category, platform, mean, ci_low, ci_high.
inline std::string category_means_csv(const DescriptiveStats& s) {
  std::string out = csv::row({"category", "platform", "mean", "ci_low", "ci_high"});
  for (EpistemicCategory c : kAllCategories) {
    for (const auto& d : s.platforms) {
      if (d.profiled_articles < 2) continue;
      const auto& ci = d.category_mean[index_of(c)];
      out += csv::row({std::string(to_string(c)), std::string(to_string(d.platform)), format_number(ci.mean),
                       format_number(ci.low), format_number(ci.high)});
    }
  }
  return out;
}

}  // namespace epiaudit
