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

#include <filesystem>
#include <optional>
#include <string>

#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/core/digest.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"

namespace epiaudit {

// On-disk layout:
//   <cache>/<platform>/<slug>.html   body bytes
//   <cache>/<platform>/<slug>.json   sidecar {title, platform, url, fetched_at,
//                                             content_hash, status}
// A sidecar with status NOT_FOUND records a 404 so offline reruns reproduce it.
struct CachePaths {
  fs::path body;
  fs::path sidecar;
};

inline CachePaths cache_paths(const fs::path& cache_dir, Platform platform,
                              std::string_view title) {
  const fs::path dir = cache_dir / std::string(dir_name(platform));
  const std::string slug = slugify(title);
  return {dir / (slug + ".html"), dir / (slug + ".json")};
}

inline bool cache_has_entry(const fs::path& cache_dir, Platform platform, std::string_view title) {
  return fs::exists(cache_paths(cache_dir, platform, title).sidecar);
}

inline void store_document(const fs::path& cache_dir, const RawDocument& doc) {
  const CachePaths paths = cache_paths(cache_dir, doc.platform, doc.title);
  atomic_write(paths.body, doc.body);
  Json sidecar = {
      {"title", doc.title},
      {"platform", std::string(to_string(doc.platform))},
      {"url", doc.url},
      {"fetched_at", doc.fetched_at},
      {"content_hash", doc.content_hash},
      {"status", "FETCHED"},
  };
  // Sidecar last: its presence marks the entry complete.
  atomic_write(paths.sidecar, canonical_dump(sidecar));
}

inline void store_not_found(const fs::path& cache_dir, Platform platform, std::string_view title,
                            std::string_view url, std::string_view fetched_at) {
  const CachePaths paths = cache_paths(cache_dir, platform, title);
  Json sidecar = {
      {"title", std::string(title)},
      {"platform", std::string(to_string(platform))},
      {"url", std::string(url)},
      {"fetched_at", std::string(fetched_at)},
      {"content_hash", nullptr},
      {"status", "NOT_FOUND"},
  };
  atomic_write(paths.sidecar, canonical_dump(sidecar));
}

// Reads an entry without network access and verifies its digest.
inline RawDocument load_cached(std::string_view title, Platform platform,
                               const fs::path& cache_dir) {
  const CachePaths paths = cache_paths(cache_dir, platform, title);
  if (!fs::exists(paths.sidecar)) {
    throw Error(ErrorCode::kCacheMiss,
                std::string(dir_name(platform)) + "/" + std::string(title));
  }
  Json sidecar;
  try {
    sidecar = Json::parse(read_file(paths.sidecar));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kDigestMismatch, "unreadable sidecar " + paths.sidecar.string());
  }
  if (sidecar.value("status", "") == "NOT_FOUND") {
    throw Error(ErrorCode::kNotFound, std::string(dir_name(platform)) + "/" + std::string(title) +
                                          " (cached 404)");
  }
  if (!fs::exists(paths.body)) {
    throw Error(ErrorCode::kCacheMiss, "missing body " + paths.body.string());
  }
  RawDocument doc;
  doc.platform = platform;
  doc.title = sidecar.at("title").get<std::string>();
  doc.url = sidecar.at("url").get<std::string>();
  doc.fetched_at = sidecar.at("fetched_at").get<std::string>();
  doc.content_hash = sidecar.at("content_hash").get<std::string>();
  doc.body = read_file(paths.body);
  if (sha256_hex(doc.body) != doc.content_hash) {
    throw Error(ErrorCode::kDigestMismatch, paths.body.string());
  }
  return doc;
}

}  // namespace epiaudit
