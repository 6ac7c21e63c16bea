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

// Tolerant HTML tokenizer and tree builder. Not a full HTML5 parser: it
// covers what encyclopedia pages need (implied end tags for p/li/dd/dt/
// table parts, void elements, raw-text elements, entities) and never fails
// on malformed markup. Unmatched end tags are dropped and unclosed elements
// are closed at end of input.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epiaudit/core/text.hpp"

namespace epiaudit::html {

struct Node {
  enum class Kind { kDocument, kElement, kText };

  Kind kind = Kind::kElement;
  std::string name;  // lower-case tag name for elements
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // decoded text for text nodes
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;

  bool is_element() const { return kind == Kind::kElement; }
  bool is_element(std::string_view tag) const { return kind == Kind::kElement && name == tag; }

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  bool has_class(std::string_view cls) const {
    const std::string* value = attr("class");
    if (!value) return false;
    std::string_view rest = *value;
    while (!rest.empty()) {
      while (!rest.empty() && is_ascii_space(static_cast<unsigned char>(rest.front()))) {
        rest.remove_prefix(1);
      }
      std::size_t end = 0;
      while (end < rest.size() && !is_ascii_space(static_cast<unsigned char>(rest[end]))) ++end;
      if (rest.substr(0, end) == cls) return true;
      rest.remove_prefix(end);
    }
    return false;
  }

  bool has_ancestor(const Node* other) const {
    for (const Node* p = parent; p; p = p->parent) {
      if (p == other) return true;
    }
    return false;
  }

  template <class Pred>
  const Node* closest(Pred&& pred) const {
    for (const Node* p = parent; p; p = p->parent) {
      if (pred(*p)) return p;
    }
    return nullptr;
  }
};

// -- entities ---------------------------------------------------------------

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::uint32_t named_entity(std::string_view name) {
  struct Entry {
    std::string_view name;
    std::uint32_t cp;
  };
  static constexpr std::array<Entry, 40> kEntities = {{
      {"amp", '&'},       {"lt", '<'},         {"gt", '>'},         {"quot", '"'},
      {"apos", '\''},     {"nbsp", 0xA0},      {"ndash", 0x2013},   {"mdash", 0x2014},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},   {"ldquo", 0x201C},   {"rdquo", 0x201D},
      {"hellip", 0x2026}, {"copy", 0xA9},      {"reg", 0xAE},       {"trade", 0x2122},
      {"middot", 0xB7},   {"bull", 0x2022},    {"deg", 0xB0},       {"para", 0xB6},
      {"sect", 0xA7},     {"laquo", 0xAB},     {"raquo", 0xBB},     {"eacute", 0xE9},
      {"egrave", 0xE8},   {"aacute", 0xE1},    {"oacute", 0xF3},    {"uuml", 0xFC},
      {"ouml", 0xF6},     {"auml", 0xE4},      {"szlig", 0xDF},     {"ccedil", 0xE7},
      {"ntilde", 0xF1},   {"iacute", 0xED},    {"uacute", 0xFA},    {"thinsp", 0x2009},
      {"ensp", 0x2002},   {"emsp", 0x2003},    {"times", 0xD7},     {"minus", 0x2212},
  }};
  for (const auto& e : kEntities) {
    if (e.name == name) return e.cp;
  }
  return 0;
}

// Decodes character references. Unknown or malformed references are kept
// verbatim.
inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back('&');
      continue;
    }
    const std::string_view ref = s.substr(i + 1, semi - i - 1);
    std::uint32_t cp = 0;
    if (!ref.empty() && ref[0] == '#') {
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      bool ok = !digits.empty();
      for (char c : digits) {
        const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                      : hex && std::isxdigit(static_cast<unsigned char>(c))
                          ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                          : -1;
        if (v < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      }
      if (!ok) cp = 0;
      if (ok && cp == 0) cp = 0xFFFD;
    } else {
      cp = named_entity(ref);
    }
    if (cp == 0) {
      out.push_back('&');
      continue;
    }
    append_utf8(out, cp);
    i = semi;
  }
  return out;
}

// -- tree building ----------------------------------------------------------

namespace detail {

inline bool is_void_element(std::string_view tag) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta",
      "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

inline bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "textarea" || tag == "title";
}

// Block-level start tags that implicitly close an open <p>.
inline bool closes_paragraph(std::string_view tag) {
  static constexpr std::array<std::string_view, 26> kTags = {
      "address", "article", "aside", "blockquote", "div", "dl", "fieldset", "figure",
      "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "main",
      "nav", "ol", "p", "pre", "section", "table", "ul"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

class TreeBuilder {
 public:
  TreeBuilder() : root_(std::make_unique<Node>()) {
    root_->kind = Node::Kind::kDocument;
    stack_.push_back(root_.get());
  }

  void text(std::string decoded) {
    if (decoded.empty()) return;
    Node* cur = stack_.back();
    if (!cur->children.empty() && cur->children.back()->kind == Node::Kind::kText) {
      cur->children.back()->text += decoded;
      return;
    }
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::kText;
    node->text = std::move(decoded);
    node->parent = cur;
    cur->children.push_back(std::move(node));
  }

  // Returns the element so raw-text content can be attached by the caller.
  Node* start(std::string name, std::vector<std::pair<std::string, std::string>> attrs,
              bool self_closing) {
    apply_implied_end_tags(name);
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::kElement;
    node->name = std::move(name);
    node->attributes = std::move(attrs);
    Node* cur = stack_.back();
    node->parent = cur;
    Node* raw = node.get();
    cur->children.push_back(std::move(node));
    if (!self_closing && !is_void_element(raw->name)) stack_.push_back(raw);
    return raw;
  }

  void end(std::string_view name) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        stack_.resize(i);
        return;
      }
      // Do not let a stray end tag escape a table or list scope.
      if (is_scope_boundary(stack_[i]->name, name)) return;
    }
  }

  std::unique_ptr<Node> finish() { return std::move(root_); }

 private:
  static bool is_scope_boundary(std::string_view open, std::string_view closing) {
    if (closing == "li") return open == "ul" || open == "ol";
    if (closing == "dd" || closing == "dt") return open == "dl";
    if (closing == "td" || closing == "th" || closing == "tr") return open == "table";
    return false;
  }

  bool in_stack(std::string_view tag, std::initializer_list<std::string_view> stop_at) const {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == tag) return true;
      for (auto s : stop_at) {
        if (stack_[i]->name == s) return false;
      }
    }
    return false;
  }

  void pop_until_including(std::string_view tag) { end(tag); }

  void apply_implied_end_tags(std::string_view tag) {
    if (closes_paragraph(tag) && in_stack("p", {"div", "td", "th", "li", "section", "main",
                                                "article", "blockquote", "table"})) {
      pop_until_including("p");
    }
    if (tag == "li" && in_stack("li", {"ul", "ol"})) pop_until_including("li");
    if ((tag == "dd" || tag == "dt")) {
      if (in_stack("dd", {"dl"})) pop_until_including("dd");
      if (in_stack("dt", {"dl"})) pop_until_including("dt");
    }
    if (tag == "tr" && in_stack("tr", {"table"})) pop_until_including("tr");
    if ((tag == "td" || tag == "th")) {
      if (in_stack("td", {"tr", "table"})) pop_until_including("td");
      if (in_stack("th", {"tr", "table"})) pop_until_including("th");
    }
    if (tag == "option" && in_stack("option", {"select"})) pop_until_including("option");
  }

  std::unique_ptr<Node> root_;
  std::vector<Node*> stack_;
};

inline bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '-' || c == '_' || c == ':' || c == '.';
}

}  // namespace detail

inline std::unique_ptr<Node> parse(std::string_view input) {
  detail::TreeBuilder builder;
  std::size_t i = 0;
  const std::size_t n = input.size();
  std::string pending;

  auto flush_text = [&] {
    if (!pending.empty()) {
      builder.text(decode_entities(pending));
      pending.clear();
    }
  };

  while (i < n) {
    const char c = input[i];
    if (c != '<') {
      pending.push_back(c);
      ++i;
      continue;
    }
    // Comment
    if (input.substr(i, 4) == "<!--") {
      flush_text();
      const std::size_t close = input.find("-->", i + 4);
      i = close == std::string_view::npos ? n : close + 3;
      continue;
    }
    // Doctype, CDATA, processing instruction
    if (i + 1 < n && (input[i + 1] == '!' || input[i + 1] == '?')) {
      flush_text();
      if (input.substr(i, 9) == "<![CDATA[") {
        const std::size_t close = input.find("]]>", i + 9);
        const std::size_t end = close == std::string_view::npos ? n : close;
        builder.text(std::string(input.substr(i + 9, end - i - 9)));
        i = close == std::string_view::npos ? n : close + 3;
      } else {
        const std::size_t close = input.find('>', i);
        i = close == std::string_view::npos ? n : close + 1;
      }
      continue;
    }
    // End tag
    if (i + 1 < n && input[i + 1] == '/') {
      std::size_t j = i + 2;
      std::size_t name_start = j;
      while (j < n && detail::is_name_char(input[j])) ++j;
      if (j == name_start) {  // "</" not followed by a name: literal text
        pending.push_back('<');
        ++i;
        continue;
      }
      flush_text();
      const std::string name = to_lower(input.substr(name_start, j - name_start));
      const std::size_t close = input.find('>', j);
      i = close == std::string_view::npos ? n : close + 1;
      builder.end(name);
      continue;
    }
    // Start tag
    std::size_t j = i + 1;
    if (j >= n || !std::isalpha(static_cast<unsigned char>(input[j]))) {
      pending.push_back('<');
      ++i;
      continue;
    }
    flush_text();
    const std::size_t name_start = j;
    while (j < n && detail::is_name_char(input[j])) ++j;
    std::string name = to_lower(input.substr(name_start, j - name_start));
    std::vector<std::pair<std::string, std::string>> attrs;
    bool self_closing = false;
    while (j < n && input[j] != '>') {
      const unsigned char ch = static_cast<unsigned char>(input[j]);
      if (is_ascii_space(ch)) {
        ++j;
        continue;
      }
      if (input[j] == '/') {
        self_closing = (j + 1 < n && input[j + 1] == '>');
        ++j;
        continue;
      }
      const std::size_t key_start = j;
      while (j < n && input[j] != '=' && input[j] != '>' && input[j] != '/' &&
             !is_ascii_space(static_cast<unsigned char>(input[j]))) {
        ++j;
      }
      std::string key = to_lower(input.substr(key_start, j - key_start));
      while (j < n && is_ascii_space(static_cast<unsigned char>(input[j]))) ++j;
      std::string value;
      if (j < n && input[j] == '=') {
        ++j;
        while (j < n && is_ascii_space(static_cast<unsigned char>(input[j]))) ++j;
        if (j < n && (input[j] == '"' || input[j] == '\'')) {
          const char quote = input[j];
          const std::size_t close = input.find(quote, j + 1);
          const std::size_t end = close == std::string_view::npos ? n : close;
          value = decode_entities(input.substr(j + 1, end - j - 1));
          j = close == std::string_view::npos ? n : close + 1;
        } else {
          const std::size_t vstart = j;
          while (j < n && input[j] != '>' && !is_ascii_space(static_cast<unsigned char>(input[j]))) {
            ++j;
          }
          value = decode_entities(input.substr(vstart, j - vstart));
        }
      }
      if (!key.empty()) attrs.emplace_back(std::move(key), std::move(value));
    }
    i = j < n ? j + 1 : n;
    Node* element = builder.start(name, std::move(attrs), self_closing);
    if (!self_closing && detail::is_raw_text_element(name)) {
      // Raw text runs to the matching end tag, case-insensitively.
      std::size_t k = i;
      std::size_t end = n;
      while (k < n) {
        const std::size_t lt = input.find("</", k);
        if (lt == std::string_view::npos) break;
        if (starts_with_icase(input.substr(lt + 2), name)) {
          end = lt;
          break;
        }
        k = lt + 2;
      }
      std::string raw(input.substr(i, end - i));
      if (name == "textarea" || name == "title") raw = decode_entities(raw);
      if (!raw.empty()) {
        auto t = std::make_unique<Node>();
        t->kind = Node::Kind::kText;
        t->text = std::move(raw);
        t->parent = element;
        element->children.push_back(std::move(t));
      }
      builder.end(name);
      const std::size_t close = end < n ? input.find('>', end) : std::string_view::npos;
      i = close == std::string_view::npos ? n : close + 1;
    }
  }
  flush_text();
  return builder.finish();
}

// -- traversal ----------------------------------------------------------------

// Pre-order visit; returning false from `fn` skips the node's subtree.
template <class Fn>
void walk(const Node& node, Fn&& fn) {
  if (!fn(node)) return;
  for (const auto& child : node.children) walk(*child, fn);
}

template <class Pred>
std::vector<const Node*> find_all(const Node& root, Pred&& pred) {
  std::vector<const Node*> out;
  walk(root, [&](const Node& n) {
    if (n.is_element() && pred(n)) out.push_back(&n);
    return true;
  });
  return out;
}

template <class Pred>
const Node* find_first(const Node& root, Pred&& pred) {
  const Node* found = nullptr;
  walk(root, [&](const Node& n) {
    if (found) return false;
    if (n.is_element() && pred(n)) {
      found = &n;
      return false;
    }
    return true;
  });
  return found;
}

inline bool is_block_element(std::string_view tag) {
  static constexpr std::array<std::string_view, 38> kBlock = {
      "address", "article", "aside", "blockquote", "br", "caption", "dd", "div", "dl",
      "dt", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
      "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section", "table", "tbody",
      "td", "tfoot", "th", "thead", "tr", "ul", "body"};
  return std::find(kBlock.begin(), kBlock.end(), tag) != kBlock.end();
}

// Plain text of a subtree. Block-level element boundaries act as whitespace;
// inline elements join their text directly. Script/style/template content
// and any node for which `skip` returns true are omitted. Non-breaking
// spaces become ordinary spaces.
template <class Skip>
std::string text_content(const Node& root, Skip&& skip) {
  std::string out;
  std::function<void(const Node&)> rec = [&](const Node& n) {
    if (n.kind == Node::Kind::kText) {
      out += n.text;
      return;
    }
    if (n.is_element()) {
      if (n.name == "script" || n.name == "style" || n.name == "template" ||
          n.name == "noscript") {
        return;
      }
      if (&n != &root && skip(n)) return;
    }
    const bool block = n.is_element() && is_block_element(n.name);
    if (block) out.push_back('\n');
    for (const auto& child : n.children) rec(*child);
    if (block) out.push_back('\n');
  };
  rec(root);
  std::string cleaned;
  cleaned.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<unsigned char>(out[i]) == 0xC2 && i + 1 < out.size() &&
        static_cast<unsigned char>(out[i + 1]) == 0xA0) {
      cleaned.push_back(' ');
      ++i;
    } else {
      cleaned.push_back(out[i]);
    }
  }
  return cleaned;
}

inline std::string text_content(const Node& root) {
  return text_content(root, [](const Node&) { return false; });
}

}  // namespace epiaudit::html
