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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epiaudit/acquisition/fetcher.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/text.hpp"
#include "epiaudit/core/types.hpp"

namespace epiaudit {

struct TopicEntry {
  std::string title;
  TopicCategory category = TopicCategory::kGeographic;
  bool include = true;
};

// Topics file: one entry per line, tab separated
//   CATEGORY <TAB> Title [<TAB> include|exclude]
// Blank lines and lines starting with '#' are ignored. Titles must be unique.
inline std::vector<TopicEntry> parse_topics(std::string_view text) {
  std::vector<TopicEntry> topics;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorCode::kParse,
                  "topics line " + std::to_string(line_no) + ": expected 2 or 3 tab-separated fields");
    }
    TopicEntry entry;
    entry.category = parse_topic_category(trim(fields[0]));
    entry.title = std::string(trim(fields[1]));
    if (entry.title.empty()) {
      throw Error(ErrorCode::kParse, "topics line " + std::to_string(line_no) + ": empty title");
    }
    if (fields.size() == 3) {
      const std::string flag = to_lower(trim(fields[2]));
      if (flag == "include" || flag == "true" || flag == "1") {
        entry.include = true;
      } else if (flag == "exclude" || flag == "false" || flag == "0") {
        entry.include = false;
      } else {
        throw Error(ErrorCode::kParse, "topics line " + std::to_string(line_no) +
                                           ": bad include flag '" + fields[2] + "'");
      }
    }
    if (!seen.insert(entry.title).second) {
      throw Error(ErrorCode::kParse, "duplicate topic title '" + entry.title + "'");
    }
    topics.push_back(std::move(entry));
  }
  return topics;
}

inline std::vector<TopicEntry> load_topics(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kConfig, "topics file not found: " + path.string());
  return parse_topics(read_file(path));
}

// Titles that are list representations rather than articles.
struct ListArticleRules {
  std::vector<std::string> prefixes = {"List of", "Lists of", "Deaths in"};

  bool matches(std::string_view title) const {
    for (const auto& p : prefixes) {
      if (starts_with_icase(trim(title), p)) return true;
    }
    return false;
  }
};

enum class PairStatus { kFetched, kMissing, kExcludedListArticle };

constexpr std::string_view to_string(PairStatus s) {
  switch (s) {
    case PairStatus::kFetched: return "FETCHED";
    case PairStatus::kMissing: return "MISSING";
    case PairStatus::kExcludedListArticle: return "EXCLUDED_LIST_ARTICLE";
  }
  return "?";
}

inline PairStatus parse_pair_status(std::string_view s) {
  for (PairStatus v : {PairStatus::kFetched, PairStatus::kMissing,
                       PairStatus::kExcludedListArticle}) {
    if (s == to_string(v)) return v;
  }
  throw Error(ErrorCode::kParse, "unknown pair status '" + std::string(s) + "'");
}

enum class Exclusion { kNone, kListArticle, kUserExcluded };

constexpr std::string_view to_string(Exclusion e) {
  switch (e) {
    case Exclusion::kNone: return "NONE";
    case Exclusion::kListArticle: return "LIST_ARTICLE";
    case Exclusion::kUserExcluded: return "USER_EXCLUDED";
  }
  return "?";
}

struct ManifestEntry {
  TopicEntry topic;
  std::map<Platform, PairStatus> status;
  Exclusion exclusion = Exclusion::kNone;
  bool eligible = false;

  bool missing_on_either() const {
    for (const auto& [p, s] : status) {
      if (s == PairStatus::kMissing) return true;
    }
    return false;
  }
};

struct ManifestSummary {
  std::size_t input = 0;
  std::size_t eligible = 0;
  std::size_t missing = 0;
  std::size_t excluded = 0;
};

struct PairManifest {
  std::vector<ManifestEntry> entries;
  std::string created_at;

  std::vector<TopicEntry> eligible_topics() const {
    std::vector<TopicEntry> out;
    for (const auto& e : entries) {
      if (e.eligible) out.push_back(e.topic);
    }
    return out;
  }

  // Each entry lands in exactly one bucket: excluded wins over missing, so
  // eligible + missing + excluded == input.
  ManifestSummary summary() const {
    ManifestSummary s;
    s.input = entries.size();
    for (const auto& e : entries) {
      if (e.eligible) {
        ++s.eligible;
      } else if (e.exclusion != Exclusion::kNone) {
        ++s.excluded;
      } else {
        ++s.missing;
      }
    }
    return s;
  }
};

inline PairManifest build_pair_manifest(const std::vector<TopicEntry>& topics,
                                        const FetchResults& results,
                                        const ListArticleRules& rules = {}) {
  PairManifest manifest;
  manifest.created_at = utc_timestamp_now();
  for (const auto& topic : topics) {
    ManifestEntry entry;
    entry.topic = topic;
    const bool is_list = rules.matches(topic.title);
    for (Platform p : kAllPlatforms) {
      auto it = results.find({topic.title, p});
      if (it == results.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "no fetch result for '" + topic.title + "' on " + std::string(to_string(p)));
      }
      PairStatus s = it->second.status == FetchStatus::kFetched ? PairStatus::kFetched
                                                                 : PairStatus::kMissing;
      if (is_list && s == PairStatus::kFetched) s = PairStatus::kExcludedListArticle;
      entry.status[p] = s;
    }
    if (is_list) {
      entry.exclusion = Exclusion::kListArticle;
    } else if (!topic.include) {
      entry.exclusion = Exclusion::kUserExcluded;
    }
    entry.eligible = entry.exclusion == Exclusion::kNone && !entry.missing_on_either();
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.summary().eligible == 0) {
    throw Error(ErrorCode::kEmptyManifest, "no topic is available on both platforms");
  }
  return manifest;
}

inline Json to_json(const PairManifest& m) {
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    Json status = Json::object();
    for (const auto& [p, s] : e.status) status[std::string(to_string(p))] = std::string(to_string(s));
    entries.push_back({
        {"title", e.topic.title},
        {"topic_category", std::string(to_string(e.topic.category))},
        {"include", e.topic.include},
        {"status", status},
        {"exclusion", std::string(to_string(e.exclusion))},
        {"eligible", e.eligible},
    });
  }
  const ManifestSummary s = m.summary();
  return {
      {"created_at", m.created_at},
      {"entries", entries},
      {"summary",
       {{"input", s.input}, {"eligible", s.eligible}, {"missing", s.missing}, {"excluded", s.excluded}}},
  };
}

inline PairManifest manifest_from_json(const Json& j) {
  PairManifest m;
  m.created_at = j.value("created_at", "");
  for (const auto& e : j.at("entries")) {
    ManifestEntry entry;
    entry.topic.title = e.at("title").get<std::string>();
    entry.topic.category = parse_topic_category(e.at("topic_category").get<std::string>());
    entry.topic.include = e.value("include", true);
    for (auto it = e.at("status").begin(); it != e.at("status").end(); ++it) {
      entry.status[parse_platform(it.key())] = parse_pair_status(it.value().get<std::string>());
    }
    const std::string excl = e.value("exclusion", "NONE");
    entry.exclusion = excl == "LIST_ARTICLE"    ? Exclusion::kListArticle
                      : excl == "USER_EXCLUDED" ? Exclusion::kUserExcluded
                                                : Exclusion::kNone;
    entry.eligible = e.at("eligible").get<bool>();
    m.entries.push_back(std::move(entry));
  }
  return m;
}

inline void write_manifest(const fs::path& path, const PairManifest& m) {
  atomic_write(path, canonical_dump(to_json(m)));
}

inline PairManifest load_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "manifest not found: " + path.string());
  return manifest_from_json(Json::parse(read_file(path)));
}

}  // namespace epiaudit
