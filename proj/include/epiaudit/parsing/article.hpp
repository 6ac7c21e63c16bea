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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/text.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/core/url.hpp"
#include "epiaudit/parsing/html.hpp"

namespace epiaudit {

struct CitationRecord {
  std::size_t index = 0;  // 1-based, contiguous within an article
  std::string raw_text;
  std::vector<std::string> urls;  // absolute http(s) URLs, document order
  std::optional<std::string> domain;  // registrable domain of urls.front()
  std::optional<std::string> anchor_title;  // first internal article link

  bool operator==(const CitationRecord&) const = default;
};

struct ParsedArticle {
  Platform platform = Platform::kWikipedia;
  std::string title;
  std::size_t word_count = 0;
  std::vector<CitationRecord> citations;
  std::string source_hash;  // content hash of the RawDocument parsed

  // Zero citations: the article stays in the corpus but is flagged.
  bool no_references() const { return citations.empty(); }

  std::optional<double> density_per_1k() const {
    if (word_count == 0) return std::nullopt;
    return static_cast<double>(citations.size()) / static_cast<double>(word_count) * 1000.0;
  }

  bool operator==(const ParsedArticle&) const = default;
};

// Number of maximal runs of non-whitespace bytes.
inline std::size_t count_words(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (is_ascii_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

namespace parsing_detail {

inline bool is_absolute_http(std::string_view href) {
  return starts_with_icase(href, "http://") || starts_with_icase(href, "https://") ||
         href.substr(0, 2) == "//";
}

// Article title behind an internal link such as "/wiki/Adam_Smith" or
// "/page/Adam_Smith". Namespaced pages ("File:", "Help:") are ignored.
inline std::optional<std::string> internal_title(std::string_view href) {
  for (std::string_view prefix : {std::string_view("/wiki/"), std::string_view("/page/")}) {
    if (href.substr(0, prefix.size()) != prefix) continue;
    std::string_view rest = href.substr(prefix.size());
    rest = rest.substr(0, rest.find_first_of("#?"));
    if (rest.empty()) return std::nullopt;
    std::string title = decode_percent(rest);
    if (title.find(':') != std::string::npos) return std::nullopt;
    for (char& c : title) {
      if (c == '_') c = ' ';
    }
    return title;
  }
  return std::nullopt;
}

template <class Skip>
CitationRecord make_citation(const html::Node& item, std::size_t index, Skip&& skip) {
  CitationRecord rec;
  rec.index = index;
  rec.raw_text = collapse_whitespace(html::text_content(item, skip));
  html::walk(item, [&](const html::Node& n) {
    if (n.is_element() && &n != &item && skip(n)) return false;
    if (!n.is_element("a")) return true;
    const std::string* href = n.attr("href");
    if (!href) return true;
    const std::string_view h = trim(*href);
    if (is_absolute_http(h)) {
      std::string url = h.substr(0, 2) == "//" ? "https:" + std::string(h) : std::string(h);
      if (std::find(rec.urls.begin(), rec.urls.end(), url) == rec.urls.end()) {
        rec.urls.push_back(std::move(url));
      }
    } else if (!rec.anchor_title) {
      rec.anchor_title = internal_title(h);
    }
    return true;
  });
  if (!rec.urls.empty()) {
    if (auto parts = parse_url(rec.urls.front())) rec.domain = registrable_domain(parts->host);
  }
  return rec;
}

}  // namespace parsing_detail

// -- serialization ------------------------------------------------------------

inline Json to_json(const CitationRecord& c) {
  Json j;
  j["index"] = c.index;
  j["raw_text"] = c.raw_text;
  j["urls"] = c.urls;
  j["domain"] = c.domain ? Json(*c.domain) : Json(nullptr);
  j["anchor_title"] = c.anchor_title ? Json(*c.anchor_title) : Json(nullptr);
  return j;
}

inline CitationRecord citation_from_json(const Json& j) {
  CitationRecord c;
  c.index = j.at("index").get<std::size_t>();
  c.raw_text = j.at("raw_text").get<std::string>();
  c.urls = j.at("urls").get<std::vector<std::string>>();
  if (!j.at("domain").is_null()) c.domain = j.at("domain").get<std::string>();
  if (!j.at("anchor_title").is_null()) c.anchor_title = j.at("anchor_title").get<std::string>();
  return c;
}

inline Json to_json(const ParsedArticle& a) {
  Json j;
  j["title"] = a.title;
  j["platform"] = std::string(to_string(a.platform));
  j["word_count"] = a.word_count;
  j["citation_count"] = a.citations.size();
  j["no_references"] = a.no_references();
  j["source_hash"] = a.source_hash;
  Json cites = Json::array();
  for (const auto& c : a.citations) cites.push_back(to_json(c));
  j["citations"] = std::move(cites);
  return j;
}

inline ParsedArticle article_from_json(const Json& j) {
  try {
    ParsedArticle a;
    a.title = j.at("title").get<std::string>();
    a.platform = parse_platform(j.at("platform").get<std::string>());
    a.word_count = j.at("word_count").get<std::size_t>();
    a.source_hash = j.value("source_hash", std::string());
    for (const auto& c : j.at("citations")) a.citations.push_back(citation_from_json(c));
    return a;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad parsed-article JSON: ") + e.what());
  }
}

// Output path for one parsed article: <dir>/<platform>/<slug>.json
inline fs::path parsed_article_path(const fs::path& dir, Platform platform,
                                    std::string_view title) {
  return dir / std::string(dir_name(platform)) / (slugify(title) + ".json");
}

inline void write_parsed_article(const fs::path& dir, const ParsedArticle& a) {
  atomic_write(parsed_article_path(dir, a.platform, a.title), canonical_dump(to_json(a)));
}

inline ParsedArticle load_parsed_article(const fs::path& dir, Platform platform,
                                         std::string_view title) {
  const fs::path path = parsed_article_path(dir, platform, title);
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "parsed article missing: " + path.string());
  }
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return article_from_json(j);
}

// corpus.csv: one row per (title, platform), in the order given.
inline std::string corpus_csv(const std::vector<ParsedArticle>& articles) {
  std::string out = csv::row({"title", "platform", "word_count", "citation_count", "density_per_1k"});
  for (const auto& a : articles) {
    const auto density = a.density_per_1k();
    out += csv::row({a.title, std::string(to_string(a.platform)), std::to_string(a.word_count),
                     std::to_string(a.citations.size()), density ? format_number(*density) : ""});
  }
  return out;
}

}  // namespace epiaudit
