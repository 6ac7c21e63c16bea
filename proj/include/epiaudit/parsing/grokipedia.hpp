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

#include <functional>
#include <optional>
#include <regex>
#include <unordered_set>

#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/parsing/html.hpp"

namespace epiaudit {

namespace grokipedia_detail {

inline std::optional<int> heading_level(const html::Node& n) {
  if (!n.is_element() || n.name.size() != 2 || n.name[0] != 'h') return std::nullopt;
  const char d = n.name[1];
  if (d < '1' || d > '6') return std::nullopt;
  return d - '0';
}

// h1 is the page title ("Open-source software" would otherwise match), so
// only h2-h6 can open a reference section.
inline bool is_reference_heading(const html::Node& n) {
  static const std::regex kPattern("reference|source|bibliograph", std::regex::icase);
  const auto level = heading_level(n);
  if (!level || *level < 2) return false;
  return std::regex_search(html::text_content(n), kPattern);
}

// Marks every node that belongs to a reference section. A section starts at
// a matching heading and runs in document order until the next heading of
// the same or a higher level.
struct SectionScan {
  std::unordered_set<const html::Node*> in_section;
  std::vector<const html::Node*> items;  // outermost <li> per section
};

inline SectionScan scan_sections(const html::Node& root) {
  SectionScan scan;
  int open_level = 0;  // 0 = outside any reference section
  std::function<void(const html::Node&, bool)> rec = [&](const html::Node& n, bool inside_item) {
    if (const auto level = heading_level(n)) {
      if (open_level && *level <= open_level) open_level = 0;
      if (!open_level && is_reference_heading(n)) open_level = *level;
    }
    // Only text nodes are recorded: a container straddling a section
    // boundary must not take its out-of-section text with it.
    const bool marked = open_level != 0;
    if (marked && n.kind == html::Node::Kind::kText) scan.in_section.insert(&n);
    if (marked && n.is_element("li") && !inside_item) {
      scan.items.push_back(&n);
      inside_item = true;
    }
    for (const auto& child : n.children) rec(*child, inside_item);
  };
  for (const auto& child : root.children) rec(*child, false);
  return scan;
}

}  // namespace grokipedia_detail

inline ParsedArticle parse_grokipedia_article(const RawDocument& doc) {
  if (doc.platform != Platform::kGrokipedia) {
    throw Error(ErrorCode::kInvalidArgument, "parse_grokipedia_article: not a Grokipedia document");
  }
  using namespace grokipedia_detail;
  const auto tree = html::parse(doc.body);
  const html::Node* root = html::find_first(*tree, [](const html::Node& n) { return n.is_element("main"); });
  if (!root) throw Error(ErrorCode::kContentRootMissing, "no <main> in '" + doc.title + "'");

  const SectionScan scan = scan_sections(*root);

  ParsedArticle out;
  out.platform = doc.platform;
  out.title = doc.title;
  out.source_hash = doc.content_hash;
  for (const html::Node* item : scan.items) {
    out.citations.push_back(parsing_detail::make_citation(*item, out.citations.size() + 1,
                                                          [](const html::Node&) { return false; }));
  }

  std::string text;
  std::function<void(const html::Node&)> rec = [&](const html::Node& n) {
    if (scan.in_section.count(&n)) return;
    if (n.kind == html::Node::Kind::kText) {
      text += n.text;
      return;
    }
    if (n.is_element() && (n.name == "script" || n.name == "style" || n.name == "template" ||
                           n.name == "noscript")) {
      return;
    }
    const bool block = n.is_element() && html::is_block_element(n.name);
    if (block) text.push_back('\n');
    for (const auto& child : n.children) rec(*child);
    if (block) text.push_back('\n');
  };
  rec(*root);
  out.word_count = count_words(text);
  return out;
}

}  // namespace epiaudit
