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
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "epiaudit/core/error.hpp"

namespace epiaudit {

namespace detail {
inline std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Platform

enum class Platform { kWikipedia, kGrokipedia };

inline constexpr std::array<Platform, 2> kAllPlatforms = {Platform::kWikipedia,
                                                          Platform::kGrokipedia};

constexpr std::string_view to_string(Platform p) {
  return p == Platform::kWikipedia ? "WIKIPEDIA" : "GROKIPEDIA";
}

// Lower-case form, used for directory names in the cache and output trees.
constexpr std::string_view dir_name(Platform p) {
  return p == Platform::kWikipedia ? "wikipedia" : "grokipedia";
}

inline Platform parse_platform(std::string_view s) {
  const std::string u = detail::upper(s);
  if (u == "WIKIPEDIA") return Platform::kWikipedia;
  if (u == "GROKIPEDIA") return Platform::kGrokipedia;
  throw Error(ErrorCode::kParse, "unknown platform '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Topic categories (closed six-value set)

enum class TopicCategory {
  kSports,
  kGeographic,
  kPoliticsConflict,
  kGenKnowledgeSociety,
  kMusic,
  kMediaEntertainment,
};

inline constexpr std::size_t kTopicCount = 6;

inline constexpr std::array<TopicCategory, kTopicCount> kAllTopics = {
    TopicCategory::kSports,           TopicCategory::kGeographic,
    TopicCategory::kPoliticsConflict, TopicCategory::kGenKnowledgeSociety,
    TopicCategory::kMusic,            TopicCategory::kMediaEntertainment,
};

constexpr std::size_t index_of(TopicCategory t) { return static_cast<std::size_t>(t); }

constexpr std::string_view to_string(TopicCategory t) {
  switch (t) {
    case TopicCategory::kSports: return "SPORTS";
    case TopicCategory::kGeographic: return "GEOGRAPHIC";
    case TopicCategory::kPoliticsConflict: return "POLITICS_CONFLICT";
    case TopicCategory::kGenKnowledgeSociety: return "GEN_KNOWLEDGE_SOCIETY";
    case TopicCategory::kMusic: return "MUSIC";
    case TopicCategory::kMediaEntertainment: return "MEDIA_ENTERTAINMENT";
  }
  return "?";
}

constexpr std::string_view display_name(TopicCategory t) {
  switch (t) {
    case TopicCategory::kSports: return "Sports & Athletics";
    case TopicCategory::kGeographic: return "Geographic Entities";
    case TopicCategory::kPoliticsConflict: return "Politics & Conflict";
    case TopicCategory::kGenKnowledgeSociety: return "Gen. Knowledge & Society";
    case TopicCategory::kMusic: return "Music & Musicians";
    case TopicCategory::kMediaEntertainment: return "Media & Entertainment";
  }
  return "?";
}

inline TopicCategory parse_topic_category(std::string_view s) {
  const std::string u = detail::upper(s);
  for (TopicCategory t : kAllTopics) {
    if (u == to_string(t)) return t;
  }
  throw Error(ErrorCode::kParse, "unknown topic category '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Epistemic categories
//
// Enumerator order is the canonical vector order and follows the decision
// tree: the wire code is index + 1 (1 = Academic ... 8 = UGC).

enum class EpistemicCategory {
  kAcademic,
  kGovernment,
  kNgoThinkTank,
  kNews,
  kOpinion,
  kCorporate,
  kReferenceTertiary,
  kUgc,
};

inline constexpr std::size_t kCategoryCount = 8;

inline constexpr std::array<EpistemicCategory, kCategoryCount> kAllCategories = {
    EpistemicCategory::kAcademic,          EpistemicCategory::kGovernment,
    EpistemicCategory::kNgoThinkTank,      EpistemicCategory::kNews,
    EpistemicCategory::kOpinion,           EpistemicCategory::kCorporate,
    EpistemicCategory::kReferenceTertiary, EpistemicCategory::kUgc,
};

constexpr std::size_t index_of(EpistemicCategory c) { return static_cast<std::size_t>(c); }
constexpr int code_of(EpistemicCategory c) { return static_cast<int>(c) + 1; }

inline EpistemicCategory category_from_code(int code) {
  if (code < 1 || code > static_cast<int>(kCategoryCount)) {
    throw Error(ErrorCode::kParse, "category code out of range: " + std::to_string(code));
  }
  return kAllCategories[static_cast<std::size_t>(code - 1)];
}

constexpr std::string_view to_string(EpistemicCategory c) {
  switch (c) {
    case EpistemicCategory::kAcademic: return "ACADEMIC";
    case EpistemicCategory::kGovernment: return "GOVERNMENT";
    case EpistemicCategory::kNgoThinkTank: return "NGO_THINKTANK";
    case EpistemicCategory::kNews: return "NEWS";
    case EpistemicCategory::kOpinion: return "OPINION";
    case EpistemicCategory::kCorporate: return "CORPORATE";
    case EpistemicCategory::kReferenceTertiary: return "REFERENCE_TERTIARY";
    case EpistemicCategory::kUgc: return "UGC";
  }
  return "?";
}

constexpr std::string_view display_name(EpistemicCategory c) {
  switch (c) {
    case EpistemicCategory::kAcademic: return "Academic & Scholarly";
    case EpistemicCategory::kGovernment: return "Government & Official";
    case EpistemicCategory::kNgoThinkTank: return "NGO, Civil Society & Think Tank";
    case EpistemicCategory::kNews: return "News & Journalism";
    case EpistemicCategory::kOpinion: return "Opinion & Advocacy";
    case EpistemicCategory::kCorporate: return "Corporate & Commercial";
    case EpistemicCategory::kReferenceTertiary: return "Reference & Tertiary Source";
    case EpistemicCategory::kUgc: return "User-Generated Content (UGC)";
  }
  return "?";
}

// Accepts the enum token ("NEWS"), the wire code ("4") or the display name.
inline EpistemicCategory parse_category(std::string_view s) {
  std::string trimmed(s);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.pop_back();
  }
  std::size_t start = 0;
  while (start < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[start]))) {
    ++start;
  }
  trimmed.erase(0, start);
  if (trimmed.size() == 1 && trimmed[0] >= '1' && trimmed[0] <= '8') {
    return category_from_code(trimmed[0] - '0');
  }
  const std::string u = detail::upper(trimmed);
  for (EpistemicCategory c : kAllCategories) {
    if (u == to_string(c) || u == detail::upper(display_name(c))) return c;
  }
  throw Error(ErrorCode::kParse, "unknown epistemic category '" + std::string(s) + "'");
}

using CategoryCounts = std::array<std::size_t, kCategoryCount>;
using CategoryVector = std::array<double, kCategoryCount>;

}  // namespace epiaudit
