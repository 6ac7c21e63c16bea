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

// Local evidence for the decision tree. Two layers:
//   work level  - markers on the cited work itself (op-ed, press release,
//                 DOI, personal blog ...), read from the URL path and the
//                 reference text;
//   host level  - what the publishing domain (or a publisher name in the
//                 text) usually produces.
// Work-level evidence always wins over host-level evidence. Anything the
// tables do not cover is left undecided for the LLM client.

#include <algorithm>
#include <array>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epiaudit/core/text.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/core/url.hpp"
#include "epiaudit/parsing/article.hpp"

namespace epiaudit {

// Decision-tree step (1..8) at which a category is assigned.
constexpr int step_of(EpistemicCategory c) { return code_of(c); }

struct HostInfo {
  std::string host;  // full lower-case host
  std::string registrable;
  std::string path;  // lower-case path + query
};

struct Evidence {
  std::optional<EpistemicCategory> work;
  std::string work_reason;
  std::optional<EpistemicCategory> host;
  std::string host_reason;
  bool platform_host = false;  // social/blog platforms: host says nothing

  std::optional<EpistemicCategory> decided() const { return work ? work : host; }
};

namespace rules_detail {

using Table = std::span<const std::string_view>;

inline bool in_table(std::string_view value, Table table) {
  return std::find(table.begin(), table.end(), value) != table.end();
}

inline bool host_has_suffix(std::string_view host, std::string_view suffix) {
  if (host == suffix.substr(1)) return true;  // suffix given with leading '.'
  return host.size() > suffix.size() && host.substr(host.size() - suffix.size()) == suffix;
}

inline constexpr std::string_view kGovernmentSuffixes[] = {
    ".gov",    ".mil",    ".int",     ".gov.uk", ".gov.au", ".gc.ca",  ".gov.in",
    ".nic.in", ".gov.cn", ".go.jp",   ".go.kr",  ".gov.br", ".gob.mx", ".gov.za",
    ".gov.tr", ".gov.pk", ".govt.nz", ".gouv.fr", ".bund.de", ".gov.il", ".gov.ie",
    ".gov.sg", ".gov.ph", ".gov.gr", ".gov.pt", ".gov.ru", ".gov.ua", ".gov.it",
    ".gob.es", ".admin.ch", ".europa.eu"};

inline constexpr std::string_view kGovernmentHosts[] = {
    "un.org",          "parliament.uk",  "kremlin.ru",     "bundestag.de",
    "bundesregierung.de", "elysee.fr",   "europa.eu",      "nato.int",
    "oireachtas.ie",   "legislation.gov.uk", "ohchr.org",  "unesco.org",
    "worldbank.org",   "imf.org",        "oecd.org",       "unhcr.org",
    "unicef.org",      "wto.org",        "icj-cij.org",    "icc-cpi.int"};

inline constexpr std::string_view kAcademicHosts[] = {
    "doi.org",        "jstor.org",       "nature.com",       "science.org",
    "sciencedirect.com", "springer.com", "wiley.com",        "tandfonline.com",
    "sagepub.com",    "oup.com",         "cambridge.org",    "pnas.org",
    "plos.org",       "arxiv.org",       "ssrn.com",         "semanticscholar.org",
    "thelancet.com",  "nejm.org",        "bmj.com",          "jamanetwork.com",
    "cell.com",       "ieee.org",        "acm.org",          "mdpi.com",
    "frontiersin.org", "annualreviews.org", "degruyter.com", "brill.com",
    "biorxiv.org",    "medrxiv.org",     "europepmc.org",    "aps.org",
    "iop.org",        "rsc.org",         "acs.org",          "royalsocietypublishing.org",
    "journals.uchicago.edu", "muse.jhu.edu", "hdl.handle.net", "scholar.archive.org"};

inline constexpr std::string_view kNgoHosts[] = {
    "brookings.edu",     "amnesty.org",      "hrw.org",           "greenpeace.org",
    "rand.org",          "cfr.org",          "heritage.org",      "cato.org",
    "pewresearch.org",   "chathamhouse.org", "carnegieendowment.org", "icrc.org",
    "oxfam.org",         "msf.org",          "splcenter.org",     "adl.org",
    "aclu.org",          "transparency.org", "worldwildlife.org", "wwf.org",
    "sipri.org",         "crisisgroup.org",  "freedomhouse.org",  "urban.org",
    "americanprogress.org", "aei.org",       "csis.org",          "iiss.org",
    "wilsoncenter.org",  "hoover.org",       "rsf.org",           "cpj.org",
    "gatesfoundation.org", "savethechildren.org", "ifrc.org",     "pewtrusts.org"};

inline constexpr std::string_view kNewsHosts[] = {
    "nytimes.com",     "wsj.com",        "washingtonpost.com", "bbc.co.uk",
    "bbc.com",         "reuters.com",    "apnews.com",         "theguardian.com",
    "cnn.com",         "npr.org",        "latimes.com",        "usatoday.com",
    "bloomberg.com",   "ft.com",         "economist.com",      "aljazeera.com",
    "espn.com",        "skysports.com",  "independent.co.uk",  "telegraph.co.uk",
    "nbcnews.com",     "cbsnews.com",    "abc.net.au",         "time.com",
    "politico.com",    "axios.com",      "foxnews.com",        "hindustantimes.com",
    "indiatimes.com",  "thehindu.com",   "dw.com",             "france24.com",
    "cbc.ca",          "globalnews.ca",  "billboard.com",      "rollingstone.com",
    "variety.com",     "hollywoodreporter.com", "goal.com",    "marca.com",
    "as.com",          "afp.com",        "pbs.org",            "news.sky.com",
    "sky.com",         "chicagotribune.com", "nypost.com",     "thetimes.co.uk",
    "irishtimes.com",  "smh.com.au",     "theglobeandmail.com", "lemonde.fr",
    "spiegel.de",      "haaretz.com",    "timesofisrael.com",  "yonhapnews.co.kr",
    "koreaherald.com", "dawn.com",       "inquirer.net",       "ekathimerini.com",
    "hurriyetdailynews.com", "dailysabah.com", "tass.com",     "themoscowtimes.com",
    "scmp.com",        "xinhuanet.com",  "eurogamer.net",      "gamespot.com",
    "ign.com",         "nme.com",        "mtv.com",            "people.com",
    "eonline.com",     "deadline.com",   "newsweek.com",       "cnbc.com",
    "huffpost.com",    "vox.com",        "theathletic.com",    "si.com"};

inline constexpr std::string_view kOpinionHosts[] = {
    "dailywire.com",      "nationalreview.com", "jacobin.com",   "thenation.com",
    "reason.com",         "commentary.org",     "spectator.co.uk", "newstatesman.com",
    "motherjones.com",    "townhall.com",       "theamericanconservative.com",
    "project-syndicate.org", "dissentmagazine.org", "americanthinker.com",
    "thefederalist.com",  "breitbart.com",      "commondreams.org", "counterpunch.org"};

inline constexpr std::string_view kCorporateHosts[] = {
    "apple.com",        "tesla.com",       "microsoft.com",   "sony.com",
    "sony.net",         "playstation.com", "nintendo.com",    "nintendo.co.jp",
    "samsung.com",      "ibm.com",         "intel.com",       "nvidia.com",
    "meta.com",         "fb.com",          "prnewswire.com",  "businesswire.com",
    "globenewswire.com", "wwe.com",        "realmadrid.com",  "fcbarcelona.com",
    "manutd.com",       "chelseafc.com",   "nufc.co.uk",      "paokfc.gr",
    "amazon.com",       "netflix.com",     "disney.com",      "universalmusic.com",
    "sonymusic.com",    "warnermusic.com", "exxonmobil.com",  "shell.com"};

inline constexpr std::string_view kTertiaryHosts[] = {
    "wikipedia.org",     "britannica.com",   "dictionary.com",   "merriam-webster.com",
    "oed.com",           "encyclopedia.com", "newworldencyclopedia.org", "infoplease.com",
    "wiktionary.org",    "wikidata.org",     "grokipedia.com",   "plato.stanford.edu",
    "iep.utm.edu",       "worldhistory.org", "encyclopedia.ushmm.org", "allmusic.com",
    "imdb.com",          "collinsdictionary.com", "thefreedictionary.com", "biography.com"};

inline constexpr std::string_view kUgcHosts[] = {
    "reddit.com",   "quora.com",      "stackexchange.com", "stackoverflow.com",
    "fandom.com",   "findagrave.com", "discogs.com",       "goodreads.com",
    "tumblr.com",   "livejournal.com", "tripadvisor.com",  "genius.com"};

// Hosts whose content spans every category; the host says nothing.
inline constexpr std::string_view kPlatformHosts[] = {
    "twitter.com",  "x.com",        "youtube.com",  "youtu.be",   "facebook.com",
    "instagram.com", "tiktok.com",  "medium.com",   "substack.com", "blogspot.com",
    "wordpress.com", "linkedin.com", "threads.net", "archive.org", "google.com",
    "archive.ph",   "archive.today", "vimeo.com",   "soundcloud.com", "bsky.app"};

// Publisher names that identify the producing organisation when the URL
// host is missing or unknown.
inline constexpr std::array<std::pair<std::string_view, EpistemicCategory>, 26> kPublisherNames = {{
    {"the new york times", EpistemicCategory::kNews},
    {"the wall street journal", EpistemicCategory::kNews},
    {"the washington post", EpistemicCategory::kNews},
    {"the guardian", EpistemicCategory::kNews},
    {"associated press", EpistemicCategory::kNews},
    {"reuters", EpistemicCategory::kNews},
    {"bbc news", EpistemicCategory::kNews},
    {"los angeles times", EpistemicCategory::kNews},
    {"financial times", EpistemicCategory::kNews},
    {"the times of india", EpistemicCategory::kNews},
    {"al jazeera", EpistemicCategory::kNews},
    {"human rights watch", EpistemicCategory::kNgoThinkTank},
    {"amnesty international", EpistemicCategory::kNgoThinkTank},
    {"brookings institution", EpistemicCategory::kNgoThinkTank},
    {"rand corporation", EpistemicCategory::kNgoThinkTank},
    {"council on foreign relations", EpistemicCategory::kNgoThinkTank},
    {"pew research center", EpistemicCategory::kNgoThinkTank},
    {"united nations", EpistemicCategory::kGovernment},
    {"united states census bureau", EpistemicCategory::kGovernment},
    {"office for national statistics", EpistemicCategory::kGovernment},
    {"encyclopædia britannica", EpistemicCategory::kReferenceTertiary},
    {"encyclopaedia britannica", EpistemicCategory::kReferenceTertiary},
    {"encyclopedia britannica", EpistemicCategory::kReferenceTertiary},
    {"merriam-webster", EpistemicCategory::kReferenceTertiary},
    {"national review", EpistemicCategory::kOpinion},
    {"business wire", EpistemicCategory::kCorporate},
}};

// A table entry matches the registrable domain or, for entries naming a
// subdomain ("muse.jhu.edu"), the host itself or any host under it.
inline bool host_in(const HostInfo& h, Table table) {
  for (std::string_view entry : table) {
    if (entry == h.registrable || entry == h.host) return true;
    if (h.host.size() > entry.size() && h.host.substr(h.host.size() - entry.size()) == entry &&
        h.host[h.host.size() - entry.size() - 1] == '.') {
      return true;
    }
  }
  return false;
}

inline std::optional<EpistemicCategory> host_category(const HostInfo& h, std::string& reason) {
  auto hit = [&](std::string_view why, EpistemicCategory c) {
    reason = std::string(why) + " host " + h.registrable;
    return std::optional<EpistemicCategory>(c);
  };
  // Subdomain entries first: "plato.stanford.edu" is tertiary even though
  // the university host is not classified.
  if (host_in(h, kAcademicHosts)) return hit("academic", EpistemicCategory::kAcademic);
  if (host_in(h, kTertiaryHosts)) return hit("tertiary", EpistemicCategory::kReferenceTertiary);
  if (host_in(h, kNgoHosts)) return hit("ngo", EpistemicCategory::kNgoThinkTank);
  if (host_in(h, kGovernmentHosts)) return hit("government", EpistemicCategory::kGovernment);
  for (std::string_view suffix : kGovernmentSuffixes) {
    if (host_has_suffix(h.host, suffix)) return hit("government", EpistemicCategory::kGovernment);
  }
  if (host_in(h, kOpinionHosts)) return hit("opinion", EpistemicCategory::kOpinion);
  if (host_in(h, kNewsHosts)) return hit("news", EpistemicCategory::kNews);
  if (host_in(h, kCorporateHosts)) return hit("corporate", EpistemicCategory::kCorporate);
  if (host_in(h, kUgcHosts)) return hit("ugc", EpistemicCategory::kUgc);
  return std::nullopt;
}

// Wayback links wrap the original URL: /web/<timestamp>/<original>.
inline std::string unwrap_archive(const std::string& url) {
  const auto parts = parse_url(url);
  if (!parts || registrable_domain(parts->host) != "archive.org") return url;
  static const std::regex kWayback(R"(^/web/[0-9a-z_*]+/(.+)$)", std::regex::icase);
  std::smatch m;
  if (std::regex_match(parts->path, m, kWayback)) {
    std::string inner = m[1].str();
    if (starts_with_icase(inner, "http://") || starts_with_icase(inner, "https://")) return inner;
  }
  return url;
}

struct Marker {
  std::regex pattern;
  EpistemicCategory category;
  std::string_view reason;
  std::optional<std::regex> unless = std::nullopt;  // vetoes a match
  // Lower-case literals of which at least one must occur for the pattern
  // to have a chance; skips the regex on most inputs.
  std::vector<std::string_view> needles = {};

  bool matches(const std::string& s, const std::string& lowered) const {
    if (!needles.empty() && std::none_of(needles.begin(), needles.end(), [&](std::string_view n) {
          return lowered.find(n) != std::string::npos;
        })) {
      return false;
    }
    return std::regex_search(s, pattern) && !(unless && std::regex_search(s, *unless));
  }
};

// Work-level markers on the reference text. Checked in decision-tree order.
inline const std::vector<Marker>& text_markers() {
  static const std::vector<Marker> kMarkers = [] {
    const auto icase = std::regex::icase | std::regex::ECMAScript;
    using C = EpistemicCategory;
    std::vector<Marker> m;
    auto add = [&](const char* re, C c, std::string_view why, std::vector<std::string_view> needles,
                   std::optional<std::regex> unless = std::nullopt) {
      m.push_back({std::regex(re, icase), c, why, std::move(unless), std::move(needles)});
    };
    add(R"(\bdoi\b[: ]*10\.\d{4,9}/)", C::kAcademic, "DOI", {"doi"});
    add(R"(\b(pmid|pmc\d+|arxiv:|bibcode)\b)", C::kAcademic, "index id", {"pmid", "pmc", "arxiv:", "bibcode"});
    add(R"(\bjournal of\b)", C::kAcademic, "journal", {"journal of"}, std::regex(R"(\bofficial journal of\b)", icase));
    add(R"(\bproceedings of\b)", C::kAcademic, "proceedings", {"proceedings of"});
    add(R"(\b(ph\.?\s?d\.?|doctoral|master'?s) (thesis|dissertation)\b)", C::kAcademic, "thesis",
        {"thesis", "dissertation"});
    add(R"(\buniversity press\b(?!\s+(release|office)))", C::kAcademic, "university press", {"university press"});
    add(R"(\b(federal register|congressional record|hansard|statutes at large|official journal of the european union)\b)",
        C::kGovernment, "official record",
        {"federal register", "congressional record", "hansard", "statutes at large", "official journal of"});
    add(R"(\bop-?ed\b|\bopinion\s*[|:]|[|:]\s*opinion\b|\beditorial\s*[|:]|\(editorial\)|\beditorial board\b)",
        C::kOpinion, "opinion piece", {"op-ed", "oped", "opinion", "editorial"});
    add(R"(\bpress release\b|\bnews release\b|\bannual report\b|\binvestor relations\b|\bu\.?s\.?\s?patent\b)",
        C::kCorporate, "institutional release",
        {"press release", "news release", "annual report", "investor relations", "patent"});
    add(R"(\bencyclop(a?e|æ)dia\b|\bdictionary\b)", C::kReferenceTertiary, "reference work", {"encyclop", "dictionary"});
    add(R"(\bpersonal (blog|website|homepage|web ?page)\b|\bself-published\b)", C::kUgc, "personal publication",
        {"personal ", "self-published"});
    return m;
  }();
  return kMarkers;
}

// Work-level markers on the URL path.
inline const std::vector<Marker>& path_markers() {
  static const std::vector<Marker> kMarkers = [] {
    const auto icase = std::regex::icase | std::regex::ECMAScript;
    using C = EpistemicCategory;
    std::vector<Marker> m;
    auto add = [&](const char* re, C c, std::string_view why, std::vector<std::string_view> needles) {
      m.push_back({std::regex(re, icase), c, why, std::nullopt, std::move(needles)});
    };
    add(R"(/(pmc|pubmed)(/|$))", C::kAcademic, "index path", {"/pmc", "/pubmed"});
    add(R"(/(opinion|opinions|op-ed|oped|commentisfree|editorials?|commentary)(/|$))", C::kOpinion,
        "opinion section", {"/opinion", "/op-ed", "/oped", "/commentisfree", "/editorial", "/commentary"});
    add(R"(/(press-?releases?|pressroom|press-room|investors?|investor-relations)(/|$)|press-?release)", C::kCorporate,
        "press section", {"press", "/investor"});
    add(R"(/~[^/]+|/(forums?|threads|viewtopic\.php)(/|$))", C::kUgc, "personal or forum path",
        {"/~", "/forum", "/threads", "/viewtopic.php"});
    return m;
  }();
  return kMarkers;
}

}  // namespace rules_detail

inline std::optional<HostInfo> primary_host(const CitationRecord& c) {
  if (c.urls.empty()) return std::nullopt;
  const auto parts = parse_url(rules_detail::unwrap_archive(c.urls.front()));
  if (!parts) return std::nullopt;
  HostInfo h;
  h.host = parts->host;
  if (h.host.substr(0, 4) == "www.") h.host.erase(0, 4);
  h.registrable = registrable_domain(h.host);
  h.path = to_lower(parts->path);
  return h;
}

inline Evidence gather_evidence(const CitationRecord& c) {
  using namespace rules_detail;
  Evidence ev;
  const auto host = primary_host(c);

  if (host) {
    ev.platform_host = host_in(*host, kPlatformHosts);
    if (!ev.platform_host) ev.host = host_category(*host, ev.host_reason);
  }
  if (!ev.host && !ev.platform_host) {
    const std::string lowered = to_lower(c.raw_text);
    for (const auto& [name, category] : kPublisherNames) {
      if (lowered.find(name) != std::string::npos) {
        ev.host = category;
        ev.host_reason = "publisher " + std::string(name);
        break;
      }
    }
  }

  // Collect work markers from both sources; the earliest tree step wins.
  std::optional<EpistemicCategory> best;
  std::string best_reason;
  auto consider = [&](EpistemicCategory c2, std::string_view why) {
    // A release from a government body or a non-profit is that body's own
    // publication, not corporate communication.
    if (c2 == EpistemicCategory::kCorporate && ev.host &&
        (*ev.host == EpistemicCategory::kGovernment || *ev.host == EpistemicCategory::kNgoThinkTank)) {
      return;
    }
    if (!best || step_of(c2) < step_of(*best)) {
      best = c2;
      best_reason = std::string(why);
    }
  };
  const std::string lowered_text = to_lower(c.raw_text);
  for (const auto& m : text_markers()) {
    if (m.matches(c.raw_text, lowered_text)) consider(m.category, m.reason);
  }
  if (host) {
    for (const auto& m : path_markers()) {
      if (m.matches(host->path, host->path)) consider(m.category, m.reason);
    }
  }
  if (best) {
    ev.work = best;
    ev.work_reason = best_reason;
  }
  return ev;
}

enum class Verdict { kYes, kNo, kUnknown };

// Answer to decision step `step` (1..8) from local evidence alone.
inline Verdict local_verdict(const Evidence& ev, int step) {
  const auto decided = ev.decided();
  if (!decided) return Verdict::kUnknown;
  return step == step_of(*decided) ? Verdict::kYes : Verdict::kNo;
}

}  // namespace epiaudit
