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

#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/parsing/html.hpp"

namespace epiaudit {

namespace wikipedia_detail {

inline bool is_reference_list(const html::Node& n) {
  return n.is_element("ol") && n.has_class("references");
}

inline bool is_citation_template(const html::Node& n) {
  return n.is_element("cite") && n.has_class("citation");
}

// Back-links ("^ a b") are navigation, not part of the reference text.
inline bool is_backlink(const html::Node& n) {
  return n.has_class("mw-cite-backlink") || n.has_class("mw-cite-up-arrow-backlink");
}

inline bool contains_citation_template(const html::Node& n) {
  return html::find_first(n, is_citation_template) != nullptr;
}

}  // namespace wikipedia_detail

// Citations are the items of every <ol class="references"> under the content
// root, plus any <cite class="citation"> outside those lists (bibliography
// and further-reading sections). Several templates inside one list item count
// once. Word count covers the content root minus the reference lists.
inline ParsedArticle parse_wikipedia_article(const RawDocument& doc) {
  if (doc.platform != Platform::kWikipedia) {
    throw Error(ErrorCode::kInvalidArgument, "parse_wikipedia_article: not a Wikipedia document");
  }
  using namespace wikipedia_detail;
  const auto tree = html::parse(doc.body);
  const html::Node* root = html::find_first(*tree, [](const html::Node& n) {
    const std::string* id = n.attr("id");
    return id && *id == "mw-content-text";
  });
  if (!root) {
    throw Error(ErrorCode::kContentRootMissing, "no #mw-content-text in '" + doc.title + "'");
  }

  ParsedArticle out;
  out.platform = doc.platform;
  out.title = doc.title;
  out.source_hash = doc.content_hash;

  auto emit = [&](const html::Node& item) {
    out.citations.push_back(
        parsing_detail::make_citation(item, out.citations.size() + 1, is_backlink));
  };

  html::walk(*root, [&](const html::Node& n) {
    if (!n.is_element()) return true;
    if (is_reference_list(n)) {
      for (const auto& child : n.children) {
        if (child->is_element("li")) emit(*child);
      }
      return false;
    }
    if (n.is_element("li") && contains_citation_template(n)) {
      emit(n);
      return false;
    }
    if (is_citation_template(n)) {
      emit(n);
      return false;
    }
    return true;
  });

  out.word_count = count_words(html::text_content(*root, is_reference_list));
  return out;
}

}  // namespace epiaudit
