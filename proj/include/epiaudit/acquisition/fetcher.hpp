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

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "epiaudit/acquisition/cache.hpp"
#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/acquisition/http.hpp"
#include "epiaudit/acquisition/rate_limiter.hpp"
#include "epiaudit/core/parallel.hpp"

namespace epiaudit {

inline std::string article_url(Platform platform, std::string_view title,
                               const FetchPolicy& policy) {
  if (platform == Platform::kWikipedia) {
    return policy.wikipedia_base + "/wiki/" + encode_title(title);
  }
  return policy.grokipedia_base + "/page/" + encode_title(title);
}

// Returns the cached document when present (unless policy.refresh), otherwise
// performs a rate-limited GET with retries and stores the result.
//
// 404 is cached as a NOT_FOUND marker and raised as kNotFound. 429 and 5xx
// responses and transport failures are retried with exponential backoff;
// when attempts run out the error is kRateLimited for 429 and kNetworkError
// otherwise.
inline RawDocument fetch_article(std::string_view topic, Platform platform,
                                 const fs::path& cache_dir, const FetchPolicy& policy,
                                 HttpTransport& transport, RateLimiter& limiter) {
  if (trim(topic).empty()) throw Error(ErrorCode::kInvalidArgument, "empty topic title");
  if (!policy.refresh && cache_has_entry(cache_dir, platform, topic)) {
    return load_cached(topic, platform, cache_dir);
  }
  if (policy.offline) {
    throw Error(ErrorCode::kCacheMiss, std::string(dir_name(platform)) + "/" +
                                           std::string(topic) + " (offline mode)");
  }

  const std::string url = article_url(platform, topic, policy);
  const auto parts = parse_url(url);
  if (!parts) throw Error(ErrorCode::kInvalidArgument, "bad base URL: " + url);
  const HttpHeaders headers = {{"User-Agent", policy.user_agent}};

  auto backoff = policy.backoff_initial;
  HttpResponse last;
  const int attempts = std::max(1, policy.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    limiter.acquire(parts->host);
    last = transport.get(url, headers);
    if (last.status == 200) {
      if (last.body.empty()) {
        last.error = "empty body";
      } else {
        RawDocument doc;
        doc.platform = platform;
        doc.title = std::string(topic);
        doc.url = url;
        doc.fetched_at = utc_timestamp_now();
        doc.body = std::move(last.body);
        doc.content_hash = sha256_hex(doc.body);
        store_document(cache_dir, doc);
        return doc;
      }
    } else if (last.status == 404) {
      store_not_found(cache_dir, platform, topic, url, utc_timestamp_now());
      throw Error(ErrorCode::kNotFound, url);
    } else if (last.status != 0 && last.status != 429 && last.status < 500) {
      throw Error(ErrorCode::kNetworkError,
                  url + " returned HTTP " + std::to_string(last.status));
    }
    if (attempt < attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(std::llround(backoff.count() * policy.backoff_factor)));
    }
  }
  if (last.status == 429) {
    throw Error(ErrorCode::kRateLimited, url + " still rate limited after " +
                                             std::to_string(attempts) + " attempts");
  }
  const std::string why = last.status != 0 ? "HTTP " + std::to_string(last.status) : last.error;
  throw Error(ErrorCode::kNetworkError,
              url + " failed after " + std::to_string(attempts) + " attempts: " + why);
}

enum class FetchStatus { kFetched, kMissing };

struct FetchOutcome {
  FetchStatus status = FetchStatus::kMissing;
  // Set when status is kMissing: the error code and message that caused it.
  std::optional<ErrorCode> error;
  std::string message;
};

using FetchResults = std::map<std::pair<std::string, Platform>, FetchOutcome>;

// Fetches every title on both platforms, at most `max_concurrency` requests
// in flight. NOT_FOUND becomes kMissing; any other error aborts the run.
inline FetchResults fetch_corpus(const std::vector<std::string>& titles,
                                 const fs::path& cache_dir, const FetchPolicy& policy,
                                 HttpTransport& transport, std::size_t max_concurrency) {
  RateLimiter limiter(policy.host_interval);
  std::vector<std::pair<std::string, Platform>> jobs;
  for (const auto& t : titles) {
    for (Platform p : kAllPlatforms) jobs.emplace_back(t, p);
  }
  std::vector<FetchOutcome> outcomes(jobs.size());
  bounded_parallel_for(jobs.size(), max_concurrency, [&](std::size_t i) {
    const auto& [title, platform] = jobs[i];
    try {
      fetch_article(title, platform, cache_dir, policy, transport, limiter);
      outcomes[i].status = FetchStatus::kFetched;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
      outcomes[i] = {FetchStatus::kMissing, e.code(), e.what()};
    }
  });
  FetchResults results;
  for (std::size_t i = 0; i < jobs.size(); ++i) results[jobs[i]] = outcomes[i];
  return results;
}

}  // namespace epiaudit
