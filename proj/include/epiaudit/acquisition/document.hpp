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

#include <chrono>
#include <filesystem>
#include <string>

#include "epiaudit/core/types.hpp"

namespace epiaudit {

struct RawDocument {
  Platform platform = Platform::kWikipedia;
  std::string title;
  std::string fetched_at;  // UTC, ISO-8601
  std::string url;
  std::string body;
  std::string content_hash;  // sha256_hex(body)
};

struct FetchPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_initial{1000};
  double backoff_factor = 2.0;
  std::chrono::milliseconds host_interval{1000};
  std::string user_agent = "epiaudit/0.1 (citation audit; contact: maintainers)";
  std::chrono::seconds timeout{30};
  // Ignore cached entries and refetch.
  bool refresh = false;
  // Never touch the network; a missing cache entry is CACHE_MISS.
  bool offline = false;
  std::string wikipedia_base = "https://en.wikipedia.org";
  std::string grokipedia_base = "https://grokipedia.com";
};

}  // namespace epiaudit
