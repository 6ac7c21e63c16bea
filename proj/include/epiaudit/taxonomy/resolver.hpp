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
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <utility>

#include "epiaudit/acquisition/fetcher.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/url.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/parsing/html.hpp"

namespace epiaudit {

// What a tertiary page turned out to be about.
struct Resolution {
  enum class Kind { kSpecificWork, kGeneralTopic, kUnknown };
  Kind kind = Kind::kUnknown;
  CitationRecord work;  // meaningful for kSpecificWork
};

class WorkResolver {
 public:
  virtual ~WorkResolver() = default;
  virtual Resolution resolve(const CitationRecord& tertiary) = 0;
};

// Page title a tertiary citation refers to: the article segment of an
// encyclopedia URL, else the first internal link, else nothing.
inline std::optional<std::string> tertiary_subject(const CitationRecord& c) {
  if (!c.urls.empty()) {
    if (const auto parts = parse_url(c.urls.front())) {
      const std::string reg = registrable_domain(parts->host);
      if (reg == "wikipedia.org" || reg == "grokipedia.com") {
        if (auto t = parsing_detail::internal_title(parts->path)) return t;
      }
    }
  }
  if (c.anchor_title) return c.anchor_title;
  return std::nullopt;
}

// Static subject -> outcome table. Subjects not listed resolve to kUnknown.
class FixtureResolver final : public WorkResolver {
 public:
  void add_work(std::string subject, CitationRecord work) {
    table_[std::move(subject)] = Resolution{Resolution::Kind::kSpecificWork, std::move(work)};
  }
  void add_general(std::string subject) {
    table_[std::move(subject)] = Resolution{Resolution::Kind::kGeneralTopic, {}};
  }

  Resolution resolve(const CitationRecord& tertiary) override {
    const auto subject = tertiary_subject(tertiary);
    if (!subject) return {};
    const auto it = table_.find(*subject);
    return it == table_.end() ? Resolution{} : it->second;
  }

  // {"<subject>": null | {"raw_text": ..., "urls": [...]}}; null = general.
  static FixtureResolver from_json(const Json& j) {
    FixtureResolver r;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_null()) {
        r.add_general(it.key());
        continue;
      }
      CitationRecord w;
      w.raw_text = it.value().at("raw_text").get<std::string>();
      w.urls = it.value().value("urls", std::vector<std::string>{});
      if (!w.urls.empty()) {
        if (auto p = parse_url(w.urls.front())) w.domain = registrable_domain(p->host);
      }
      r.add_work(it.key(), std::move(w));
    }
    return r;
  }

 private:
  std::map<std::string, Resolution> table_;
};

namespace resolver_detail {

// Reads label/value rows of the first infobox. A page describes one work
// when the box names both an author and a publication detail.
inline std::optional<CitationRecord> work_from_infobox(const html::Node& root, const std::string& title) {
  const html::Node* box = html::find_first(root, [](const html::Node& n) {
    return n.is_element("table") && n.has_class("infobox");
  });
  if (!box) return std::nullopt;
  static const std::regex kAuthor(R"(^(authors?|written by|editors?)$)", std::regex::icase);
  static const std::regex kPublication(
      R"(^(publisher|published|publication date|publication|journal|isbn|doi)$)", std::regex::icase);
  std::string author, details;
  bool has_publication = false;
  for (const html::Node* row : html::find_all(*box, [](const html::Node& n) { return n.is_element("tr"); })) {
    const html::Node* th = html::find_first(*row, [](const html::Node& n) { return n.is_element("th"); });
    const html::Node* td = html::find_first(*row, [](const html::Node& n) { return n.is_element("td"); });
    if (!th || !td) continue;
    const std::string label = collapse_whitespace(html::text_content(*th));
    const std::string value = collapse_whitespace(html::text_content(*td));
    if (std::regex_match(label, kAuthor)) {
      author = value;
    } else if (std::regex_match(label, kPublication)) {
      has_publication = true;
      details += " " + label + ": " + value + ".";
    }
  }
  if (author.empty() || !has_publication) return std::nullopt;
  CitationRecord work;
  work.raw_text = author + ". " + title + "." + details;
  return work;
}

}  // namespace resolver_detail

// Looks the tertiary page up through the acquisition cache (fetching when
// the policy allows) and inspects its infobox. Pages that cannot be
// obtained resolve to kUnknown.
class CacheResolver final : public WorkResolver {
 public:
  CacheResolver(fs::path cache_dir, FetchPolicy policy, std::shared_ptr<HttpTransport> transport)
      : cache_dir_(std::move(cache_dir)), policy_(std::move(policy)), transport_(std::move(transport)),
        limiter_(policy_.host_interval) {}

  Resolution resolve(const CitationRecord& tertiary) override {
    const auto subject = tertiary_subject(tertiary);
    if (!subject) return {};
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(*subject); it != memo_.end()) return it->second;
    }
    Resolution out;
    try {
      const RawDocument doc =
          fetch_article(*subject, Platform::kWikipedia, cache_dir_, policy_, *transport_, limiter_);
      const auto tree = html::parse(doc.body);
      if (auto work = resolver_detail::work_from_infobox(*tree, *subject)) {
        out = Resolution{Resolution::Kind::kSpecificWork, std::move(*work)};
      } else {
        out = Resolution{Resolution::Kind::kGeneralTopic, {}};
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCacheMiss && e.code() != ErrorCode::kNotFound &&
          e.code() != ErrorCode::kNetworkError && e.code() != ErrorCode::kRateLimited) {
        throw;
      }
    }
    std::lock_guard lock(mutex_);
    memo_[*subject] = out;
    return out;
  }

 private:
  fs::path cache_dir_;
  FetchPolicy policy_;
  std::shared_ptr<HttpTransport> transport_;
  RateLimiter limiter_;
  std::mutex mutex_;
  std::map<std::string, Resolution> memo_;
};

}  // namespace epiaudit
