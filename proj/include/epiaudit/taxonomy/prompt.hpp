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
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "epiaudit/core/digest.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/text.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/parsing/article.hpp"

namespace epiaudit {

// The coding manual sent with every model request. Loaded once, never
// modified; its version and digest go into every report.
struct PromptAsset {
  std::string manual_text;
  std::string version;
  std::string digest;  // sha256 of manual_text
};

// The file starts with a front-matter block holding "version: <v>":
//   ---
//   version: 1.2
//   ---
inline PromptAsset parse_prompt_asset(std::string_view text) {
  PromptAsset asset;
  std::string_view body = text;
  if (body.substr(0, 4) == "---\n") {
    const std::size_t end = body.find("\n---\n", 3);
    if (end == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "coding manual: unterminated front matter");
    }
    for (const auto& line : split(body.substr(4, end - 4), '\n')) {
      const std::string_view l = trim(line);
      if (l.substr(0, 8) == "version:") asset.version = std::string(trim(l.substr(8)));
    }
    body = body.substr(end + 5);
  }
  if (asset.version.empty()) throw Error(ErrorCode::kConfig, "coding manual has no version");
  asset.manual_text = std::string(trim(body));
  asset.digest = sha256_hex(asset.manual_text);
  return asset;
}

inline PromptAsset load_prompt_asset(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kConfig, "coding manual not found: " + path.string());
  return parse_prompt_asset(read_file(path));
}

// Step questions, in tree order.
inline constexpr std::array<std::string_view, 8> kStepQuestions = {
    "Is the cited work itself peer-reviewed original scholarship, such as a journal article, "
    "conference paper, thesis or scholarly monograph?",
    "Was the cited work issued officially by a governmental body: a legislature, a court, an "
    "executive agency or an intergovernmental organisation?",
    "Is the cited work a report or publication of a non-profit, mission-driven organisation "
    "such as an NGO, a foundation or a think tank?",
    "Is the cited work factual reporting on events, produced by a journalist or a news "
    "publisher?",
    "Is the cited work commentary meant to persuade, such as an op-ed, an editorial, a column "
    "or an advocacy piece?",
    "Is the cited work material that a for-profit company published about its own business, "
    "such as a press release, an annual report, a product page or a company blog post?",
    "Is the cited work a tertiary source such as an encyclopedia article or a dictionary entry?",
    "Was the cited work produced informally by a private individual acting outside any "
    "institution, such as a social media post, a forum post or a personal blog entry?",
};

namespace prompt_detail {

inline void append_citation_block(std::string& out, const CitationRecord& c) {
  out += "Citation under review:\n";
  out += "- Reference text: " + collapse_whitespace(c.raw_text) + "\n";
  if (!c.urls.empty()) out += "- URL: " + c.urls.front() + "\n";
  if (c.domain) out += "- Domain: " + *c.domain + "\n";
}

inline std::string with_manual(const PromptAsset& asset, std::string_view task) {
  std::string out = asset.manual_text;
  out += "\n\n=== TASK ===\n";
  out += task;
  return out;
}

}  // namespace prompt_detail

// Full classification request. Category names appear once each, in the
// legend.
inline std::string build_classifier_prompt(const PromptAsset& asset, const CitationRecord& c) {
  std::string task;
  task += "Classify the citation below into exactly one category of the manual.\n\n";
  task += "Category codes:\n";
  for (EpistemicCategory cat : kAllCategories) {
    task += std::to_string(code_of(cat)) + " = " + std::string(display_name(cat)) + "\n";
  }
  task += "\n";
  prompt_detail::append_citation_block(task, c);
  task += "\nReply with two lines and nothing else:\n";
  task += "Category: <code 1-8>\n";
  task += "Justification: <one line>\n";
  return prompt_detail::with_manual(asset, task);
}

// Yes/no request for one decision step.
inline std::string build_step_prompt(const PromptAsset& asset, const CitationRecord& c, int step) {
  if (step < 1 || step > 8) throw Error(ErrorCode::kInvalidArgument, "step out of range");
  std::string task;
  task += "Answer one question of the decision tree for the citation below.\n\n";
  prompt_detail::append_citation_block(task, c);
  task += "\nQuestion (Step " + std::to_string(step) + "): ";
  task += kStepQuestions[static_cast<std::size_t>(step - 1)];
  task += "\n\nReply with a single line: \"Answer: YES\" or \"Answer: NO\".\n";
  return prompt_detail::with_manual(asset, task);
}

// Look-through request for a tertiary page the resolver could not settle.
inline std::string build_look_through_prompt(const PromptAsset& asset, const CitationRecord& c) {
  std::string task;
  task += "The citation below points to a tertiary source.\n\n";
  prompt_detail::append_citation_block(task, c);
  task += "\nQuestion (Look-through): Is the tertiary page about one specific citable work, such "
          "as a particular book, journal article or report, rather than a general topic?\n\n";
  task += "If it is, reply \"Work: <author, title, publisher, year of that work>\".\n";
  task += "If it is not, reply \"Answer: GENERAL\".\n";
  return prompt_detail::with_manual(asset, task);
}

// -- response parsing -----------------------------------------------------------

struct LabelAnswer {
  EpistemicCategory category;
  std::optional<double> confidence;
};

namespace prompt_detail {

// The text after "<key>:" on the first line that starts with it, or the
// whole response when no such line exists.
inline std::string keyed_line(std::string_view response, std::string_view key) {
  for (const auto& line : split(response, '\n')) {
    std::string_view l = trim(line);
    while (!l.empty() && (l.front() == '*' || l.front() == '#' || l.front() == '-')) {
      l.remove_prefix(1);
    }
    l = trim(l);
    if (starts_with_icase(l, key)) {
      std::string_view rest = trim(l.substr(key.size()));
      while (!rest.empty() && rest.front() == '*') rest.remove_prefix(1);
      if (!rest.empty() && (rest.front() == ':' || rest.front() == '=')) {
        return std::string(trim(rest.substr(1)));
      }
    }
  }
  return std::string(response);
}

inline std::optional<double> parse_confidence(std::string_view response) {
  static const std::regex kConf(R"(confidence\s*[:=]\s*([0-9]*\.?[0-9]+)\s*(%)?)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(response.begin(), response.end(), m, kConf)) return std::nullopt;
  double v = std::stod(m[1].str());
  if (m[2].matched || v > 1.0) v /= 100.0;
  if (v < 0.0 || v > 1.0) return std::nullopt;
  return v;
}

}  // namespace prompt_detail

// Extracts one category from a model reply. Category names win over bare
// codes so that "5 (Academic & Scholarly)" reads as Academic; a reply naming
// two categories, or none, is malformed.
inline LabelAnswer parse_llm_label(std::string_view response) {
  static const std::array<std::pair<EpistemicCategory, std::regex>, 8> kNames = {{
      {EpistemicCategory::kAcademic, std::regex(R"(\b(academic|scholarly)\b)", std::regex::icase)},
      {EpistemicCategory::kGovernment, std::regex(R"(\bgovernment\b)", std::regex::icase)},
      {EpistemicCategory::kNgoThinkTank,
       std::regex(R"(\b(ngo|ngo_thinktank|think[ -]?tank|civil society)\b)", std::regex::icase)},
      {EpistemicCategory::kNews, std::regex(R"(\b(news|journalism)\b)", std::regex::icase)},
      {EpistemicCategory::kOpinion, std::regex(R"(\b(opinion|advocacy)\b)", std::regex::icase)},
      {EpistemicCategory::kCorporate, std::regex(R"(\b(corporate|commercial)\b)", std::regex::icase)},
      {EpistemicCategory::kReferenceTertiary,
       std::regex(R"(\b(reference|tertiary|reference_tertiary)\b)", std::regex::icase)},
      {EpistemicCategory::kUgc, std::regex(R"(\b(ugc|user[- ]generated)\b)", std::regex::icase)},
  }};
  const std::string scope = prompt_detail::keyed_line(response, "category");
  std::set<EpistemicCategory> named;
  for (const auto& [cat, re] : kNames) {
    if (std::regex_search(scope, re)) named.insert(cat);
  }
  if (named.size() > 1) {
    throw Error(ErrorCode::kMalformedResponse, "reply names more than one category");
  }
  LabelAnswer answer{EpistemicCategory::kAcademic, prompt_detail::parse_confidence(response)};
  if (named.size() == 1) {
    answer.category = *named.begin();
    return answer;
  }
  static const std::regex kCode(R"((^|[^0-9.])([1-8])(?![0-9]|\.[0-9]))");
  std::set<int> codes;
  for (auto it = std::sregex_iterator(scope.begin(), scope.end(), kCode); it != std::sregex_iterator(); ++it) {
    codes.insert(std::stoi((*it)[2].str()));
  }
  if (codes.size() != 1) {
    throw Error(ErrorCode::kMalformedResponse,
                codes.empty() ? "reply holds no category" : "reply holds several category codes");
  }
  answer.category = category_from_code(*codes.begin());
  return answer;
}

inline bool parse_yes_no(std::string_view response) {
  const std::string scope = prompt_detail::keyed_line(response, "answer");
  static const std::regex kYes(R"(\byes\b)", std::regex::icase);
  static const std::regex kNo(R"(\bno\b)", std::regex::icase);
  const bool yes = std::regex_search(scope, kYes);
  const bool no = std::regex_search(scope, kNo);
  if (yes == no) throw Error(ErrorCode::kMalformedResponse, "expected exactly one of YES/NO");
  return yes;
}

// nullopt = general topic; otherwise the described underlying work.
inline std::optional<std::string> parse_look_through_answer(std::string_view response) {
  for (const auto& line : split(response, '\n')) {
    const std::string_view l = trim(line);
    if (starts_with_icase(l, "work:")) {
      const std::string desc(trim(l.substr(5)));
      if (desc.empty()) break;
      return desc;
    }
  }
  static const std::regex kGeneral(R"(\bgeneral\b)", std::regex::icase);
  if (std::regex_search(std::string(response), kGeneral)) return std::nullopt;
  throw Error(ErrorCode::kMalformedResponse, "expected \"Work: ...\" or GENERAL");
}

}  // namespace epiaudit
