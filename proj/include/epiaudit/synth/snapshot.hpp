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
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epiaudit/acquisition/cache.hpp"
#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/acquisition/fetcher.hpp"
#include "epiaudit/acquisition/manifest.hpp"
#include "epiaudit/core/digest.hpp"
#include "epiaudit/core/types.hpp"

// Seeded generator for a synthetic two-platform corpus. It stands in for a
// frozen crawl when the live sites are out of reach: documents are written
// into a cache tree exactly as the fetcher would, in each platform's markup.
namespace epiaudit::synth {

struct PlatformModel {
  double words_mean = 0.0;
  double words_sd = 0.0;
  double intercept = 0.0;  // citations = intercept + slope * words + noise
  double slope = 0.0;
  double noise_sd = 0.0;
  CategoryVector mix{};  // corpus-wide category shares
  double concentration = 40.0;  // Dirichlet concentration around the mix
};

// Rough magnitudes of a high-attention encyclopedia corpus; the shares are
// in canonical category order.
inline PlatformModel default_model(Platform p) {
  PlatformModel m;
  if (p == Platform::kWikipedia) {
    m.words_mean = 11439.0;
    m.words_sd = 3448.0;
    m.slope = 0.037;
    m.intercept = 70.0;
    m.noise_sd = 170.0;
    m.mix = {0.318, 0.099, 0.044, 0.329, 0.055, 0.070, 0.077, 0.009};
  } else {
    m.words_mean = 14241.0;
    m.words_sd = 5044.0;
    m.slope = 0.021;
    m.intercept = 22.0;
    m.noise_sd = 76.0;
    m.mix = {0.088, 0.150, 0.151, 0.284, 0.069, 0.100, 0.102, 0.055};
  }
  return m;
}

// Topic tilt applied to the mix before sampling, then renormalized.
inline CategoryVector topic_tilt(Platform p, TopicCategory t) {
  CategoryVector w;
  w.fill(1.0);
  const bool leisure = t == TopicCategory::kSports || t == TopicCategory::kMusic ||
                       t == TopicCategory::kMediaEntertainment;
  if (leisure) {
    w[index_of(EpistemicCategory::kAcademic)] = 0.35;
    w[index_of(EpistemicCategory::kNews)] = 1.6;
    w[index_of(EpistemicCategory::kCorporate)] = 1.4;
  } else if (p == Platform::kWikipedia) {
    w[index_of(EpistemicCategory::kAcademic)] = 1.4;
  } else {
    w[index_of(EpistemicCategory::kGovernment)] = 1.5;
    w[index_of(EpistemicCategory::kNgoThinkTank)] = 1.5;
  }
  return w;
}

struct SyntheticCitation {
  std::string text;
  std::string url;
};

// One citation of the given category whose text and URL the rule engine
// settles without a model: each template carries a host or a marker that
// decides it.
inline SyntheticCitation make_citation(EpistemicCategory c, std::size_t n, std::mt19937_64& rng) {
  static constexpr std::array<std::string_view, 4> kSurnames = {"Abara", "Lindqvist", "Moreau", "Tanaka"};
  const std::string who(kSurnames[rng() % kSurnames.size()]);
  const std::string id = std::to_string(n);
  const std::string year = std::to_string(1990 + static_cast<int>(rng() % 35));
  switch (c) {
    case EpistemicCategory::kAcademic:
      return {who + ", A. (" + year + "). \"Study " + id + "\". Journal of Comparative Studies. 12 (3): 45-67. doi:10.5555/cs." + id,
              "https://doi.org/10.5555/cs." + id};
    case EpistemicCategory::kGovernment:
      return {"\"Annual statistical release " + id + "\". Bureau of Statistics. " + year + ".",
              "https://www.census.gov/library/release-" + id + ".html"};
    case EpistemicCategory::kNgoThinkTank:
      return {who + ", B. (" + year + "). \"Policy brief " + id + "\". Brookings Institution.",
              "https://www.brookings.edu/articles/brief-" + id + "/"};
    case EpistemicCategory::kNews:
      return {who + ", C. (" + year + "). \"Report " + id + "\". BBC News.",
              "https://www.bbc.com/news/world-" + id};
    case EpistemicCategory::kOpinion:
      return {who + ", D. (" + year + "). \"Why we must act " + id + "\". Opinion. The New York Times.",
              "https://www.nytimes.com/" + year + "/01/01/opinion/act-" + id + ".html"};
    case EpistemicCategory::kCorporate:
      return {"\"Company announces results " + id + "\" (Press release). Apple Inc. " + year + ".",
              "https://www.apple.com/newsroom/" + year + "/results-" + id + "/"};
    case EpistemicCategory::kReferenceTertiary:
      return {"\"Entry " + id + "\". Encyclopaedia Britannica.", "https://www.britannica.com/topic/entry-" + id};
    case EpistemicCategory::kUgc:
      return {"u/user" + id + " (" + year + "). \"Discussion thread\". Reddit.",
              "https://www.reddit.com/r/history/comments/" + id + "/"};
  }
  return {};
}

struct SyntheticArticle {
  std::string title;
  Platform platform = Platform::kWikipedia;
  std::size_t body_words = 0;
  std::vector<EpistemicCategory> labels;  // category of each citation, in order
};

namespace detail {

inline std::string body_text(std::size_t words, std::mt19937_64& rng) {
  static constexpr std::array<std::string_view, 16> kVocab = {
      "history", "region", "season", "record", "policy", "album", "league", "century",
      "public", "early", "career", "state", "major", "later", "first", "series"};
  std::string out;
  out.reserve(words * 7);
  for (std::size_t i = 0; i < words; ++i) {
    if (i % 120 == 0) out += i ? "</p>\n<p>" : "<p>";
    else out += ' ';
    out += kVocab[rng() % kVocab.size()];
  }
  out += "</p>\n";
  return out;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Markup in the shape each parser expects: a references list inside the
// content root for Wikipedia, a headed list inside <main> for Grokipedia.
inline std::string render_html(const SyntheticArticle& a, std::mt19937_64& rng) {
  std::string refs;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    const SyntheticCitation c = make_citation(a.labels[i], i + 1, rng);
    if (a.platform == Platform::kWikipedia) {
      refs += "<li id=\"cite_note-" + std::to_string(i + 1) + "\"><span class=\"mw-cite-backlink\"><a href=\"#cite_ref-" +
              std::to_string(i + 1) + "\">^</a></span> <span class=\"reference-text\"><cite class=\"citation\">" +
              detail::escape(c.text) + "</cite> <a class=\"external text\" href=\"" + c.url + "\">link</a></span></li>\n";
    } else {
      refs += "<li><a href=\"" + c.url + "\">" + detail::escape(c.text) + "</a></li>\n";
    }
  }
  const std::string body = detail::body_text(a.body_words, rng);
  const std::string title = detail::escape(a.title);
  if (a.platform == Platform::kWikipedia) {
    return "<!DOCTYPE html>\n<html><head><title>" + title + " - Wikipedia</title></head><body>\n<h1>" + title +
           "</h1>\n<div id=\"mw-content-text\"><div class=\"mw-parser-output\">\n" + body +
           "<div class=\"reflist\"><ol class=\"references\">\n" + refs + "</ol></div>\n</div></div>\n</body></html>\n";
  }
  return "<!DOCTYPE html>\n<html><head><title>" + title + "</title></head><body>\n<main>\n" + body +
         "<h2>References</h2>\n<ol>\n" + refs + "</ol>\n</main>\n</body></html>\n";
}

// Draws one article: word count from a clipped normal, citation count from
// the linear model, and labels from a multinomial over a Dirichlet draw
// around the tilted mix.
inline SyntheticArticle draw_article(const std::string& title, TopicCategory topic, Platform p,
                                     const PlatformModel& m, std::mt19937_64& rng) {
  SyntheticArticle a;
  a.title = title;
  a.platform = p;
  std::normal_distribution<double> words(m.words_mean, m.words_sd);
  std::normal_distribution<double> noise(0.0, m.noise_sd);
  const double w = std::max(1500.0, words(rng));
  a.body_words = static_cast<std::size_t>(std::llround(w));
  const double cites = std::max(20.0, m.intercept + m.slope * w + noise(rng));
  const auto n = static_cast<std::size_t>(std::llround(cites));

  const CategoryVector tilt = topic_tilt(p, topic);
  std::array<double, kCategoryCount> alpha{};
  double total = 0.0;
  for (std::size_t i = 0; i < kCategoryCount; ++i) total += m.mix[i] * tilt[i];
  std::array<double, kCategoryCount> shares{};
  double draw_total = 0.0;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    alpha[i] = m.concentration * m.mix[i] * tilt[i] / total;
    std::gamma_distribution<double> g(alpha[i], 1.0);
    shares[i] = g(rng);
    draw_total += shares[i];
  }
  for (auto& s : shares) s /= draw_total;
  std::discrete_distribution<std::size_t> pick(shares.begin(), shares.end());
  for (std::size_t i = 0; i < n; ++i) a.labels.push_back(kAllCategories[pick(rng)]);
  return a;
}

inline constexpr std::string_view kSnapshotTime = "2025-11-02T00:00:00Z";

struct SnapshotSummary {
  std::size_t documents = 0;
  std::size_t citations = 0;
};

// Writes every topic on both platforms into `cache_dir`. Same topics and
// seed give byte-identical cache files.
inline SnapshotSummary write_snapshot(const std::vector<TopicEntry>& topics, const fs::path& cache_dir,
                                      std::uint64_t seed) {
  SnapshotSummary s;
  const FetchPolicy urls;
  for (Platform p : kAllPlatforms) {
    const PlatformModel model = default_model(p);
    std::mt19937_64 rng(seed ^ (p == Platform::kWikipedia ? 0x5749ULL : 0x4752ULL));
    for (const auto& t : topics) {
      const SyntheticArticle a = draw_article(t.title, t.category, p, model, rng);
      RawDocument doc;
      doc.platform = p;
      doc.title = t.title;
      doc.url = article_url(p, t.title, urls);
      doc.fetched_at = std::string(kSnapshotTime);
      doc.body = render_html(a, rng);
      doc.content_hash = sha256_hex(doc.body);
      store_document(cache_dir, doc);
      ++s.documents;
      s.citations += a.labels.size();
    }
  }
  return s;
}

}  // namespace epiaudit::synth
