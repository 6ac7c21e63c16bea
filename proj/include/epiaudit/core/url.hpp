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
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "epiaudit/core/text.hpp"

namespace epiaudit {

struct UrlParts {
  std::string scheme;  // lower-case, e.g. "https"
  std::string host;    // lower-case, without port
  int port = 0;        // 0 when absent
  std::string path;    // path + query, starts with '/'
};

// Splits an absolute http(s) URL. Protocol-relative URLs ("//host/x") are
// taken as https. Returns nullopt for anything else.
inline std::optional<UrlParts> parse_url(std::string_view url) {
  url = trim(url);
  UrlParts parts;
  std::string_view rest;
  if (url.substr(0, 2) == "//") {
    parts.scheme = "https";
    rest = url.substr(2);
  } else {
    const auto colon = url.find("://");
    if (colon == std::string_view::npos) return std::nullopt;
    parts.scheme = to_lower(url.substr(0, colon));
    if (parts.scheme != "http" && parts.scheme != "https") return std::nullopt;
    rest = url.substr(colon + 3);
  }
  const auto path_start = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, path_start);
  parts.path = path_start == std::string_view::npos ? "/" : std::string(rest.substr(path_start));
  if (!parts.path.empty() && parts.path.front() != '/') parts.path.insert(0, "/");
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  if (const auto colon = authority.rfind(':');
      colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    authority = authority.substr(0, colon);
    int value = 0;
    for (char c : port) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      value = value * 10 + (c - '0');
    }
    parts.port = value;
  }
  parts.host = to_lower(authority);
  while (!parts.host.empty() && parts.host.back() == '.') parts.host.pop_back();
  if (parts.host.empty()) return std::nullopt;
  return parts;
}

// Second-level public suffixes that take one more label to form a
// registrable domain. Not the full public suffix list; covers the suffixes
// that actually show up in encyclopedia reference lists.
inline bool is_two_label_suffix(std::string_view suffix) {
  static constexpr std::array<std::string_view, 48> kSuffixes = {
      "co.uk",  "ac.uk",  "gov.uk", "org.uk", "net.uk", "ltd.uk", "plc.uk", "nhs.uk",
      "com.au", "gov.au", "edu.au", "org.au", "net.au", "co.nz",  "govt.nz", "org.nz",
      "ac.nz",  "co.jp",  "ac.jp",  "go.jp",  "or.jp",  "ne.jp",  "com.br", "gov.br",
      "org.br", "co.in",  "gov.in", "ac.in",  "nic.in", "com.cn", "gov.cn", "edu.cn",
      "com.mx", "gob.mx", "co.za",  "gov.za", "ac.za",  "co.kr",  "go.kr",  "ac.kr",
      "com.tr", "gov.tr", "edu.tr", "com.pk", "gov.pk", "edu.pk", "gc.ca",  "com.ar",
  };
  for (auto s : kSuffixes) {
    if (s == suffix) return true;
  }
  return false;
}

// Registrable domain (eTLD+1) of a host, e.g. "news.bbc.co.uk" -> "bbc.co.uk".
inline std::string registrable_domain(std::string_view host) {
  std::string h = to_lower(host);
  bool numeric = !h.empty();
  for (char c : h) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') numeric = false;
  }
  if (numeric) return h;
  const auto last = h.rfind('.');
  if (last == std::string::npos || last == 0) return h;
  const auto second = h.rfind('.', last - 1);
  if (second == std::string::npos) return h;
  if (is_two_label_suffix(std::string_view(h).substr(second + 1))) {
    if (second == 0) return h;
    const auto third = h.rfind('.', second - 1);
    return third == std::string::npos ? h : h.substr(third + 1);
  }
  return h.substr(second + 1);
}

// Percent-encodes everything outside the RFC 3986 unreserved set, with
// spaces first mapped to '_' (encyclopedia title convention).
inline std::string encode_title(std::string_view title) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : title) {
    if (c == ' ') c = '_';
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0f]);
    }
  }
  return out;
}

inline std::string decode_percent(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace epiaudit
