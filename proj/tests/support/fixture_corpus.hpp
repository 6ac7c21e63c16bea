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

// Shared by the pipeline tests and the acceptance gate: builds a document
// cache from the bundled three-pair corpus and supplies the mocked
// classifier used for offline runs.

#pragma once

#include <atomic>
#include <random>
#include <string>

#include "epiaudit/epiaudit.hpp"

#ifndef EPIAUDIT_SOURCE_DIR
#error "EPIAUDIT_SOURCE_DIR must point at the repository root"
#endif

namespace epiaudit::testing {

inline fs::path source_dir() { return fs::path(EPIAUDIT_SOURCE_DIR); }
inline fs::path fixture_dir() { return source_dir() / "tests" / "fixtures"; }
inline fs::path e2e_dir() { return fixture_dir() / "e2e"; }

inline constexpr std::string_view kFixtureFetchedAt = "2025-11-02T00:00:00Z";

// Fresh directory under the system temp dir; removed by the destructor.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("epiaudit-" + std::string(tag) + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Copies every fixture page into `cache_dir` the way the fetcher would.
inline std::size_t build_fixture_cache(const fs::path& cache_dir) {
  std::size_t n = 0;
  const FetchPolicy urls;
  for (const auto& t : load_topics(e2e_dir() / "topics.tsv")) {
    for (Platform p : kAllPlatforms) {
      std::string file = t.title;
      for (char& c : file) {
        if (c == ' ') c = '_';
      }
      RawDocument doc;
      doc.platform = p;
      doc.title = t.title;
      doc.url = article_url(p, t.title, urls);
      doc.fetched_at = std::string(kFixtureFetchedAt);
      doc.body = read_file(e2e_dir() / std::string(dir_name(p)) / (file + ".html"));
      doc.content_hash = sha256_hex(doc.body);
      store_document(cache_dir, doc);
      ++n;
    }
  }
  return n;
}

// Stand-in for a model: every tertiary page is a general topic and any step
// the rules cannot settle is answered as informal content.
inline std::string mock_model_reply(const std::string& prompt) {
  if (prompt.find("Question (Look-through)") != std::string::npos) return "Answer: GENERAL";
  if (prompt.find("Question (Step 8)") != std::string::npos) return "Answer: YES";
  return "Answer: NO";
}

inline AuditConfig fixture_config(const fs::path& work) {
  AuditConfig c;
  c.topics_file = e2e_dir() / "topics.tsv";
  c.cache_dir = work / "cache";
  c.output_dir = work / "out";
  c.manual_file = source_dir() / "data" / "coding_manual.md";
  c.resolver_fixture = e2e_dir() / "resolver.json";
  c.classifier = ClassifierMode::kHybrid;
  c.fetch.offline = true;
  c.extremes_k = 1;
  c.max_inflight = 2;
  return c;
}

}  // namespace epiaudit::testing
