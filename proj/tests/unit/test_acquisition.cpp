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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

#include "epiaudit/epiaudit.hpp"
#include "../support/fixture_corpus.hpp"

namespace epiaudit {
namespace {

using testing::TempDir;

// Local HTTP server standing in for both encyclopedias. Every request path
// is logged.
class FixtureServer {
 public:
  FixtureServer() {
    server_.Get(R"(/(wiki|page)/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      log_.push_back(req.path);
      std::string title = decode_percent(req.matches[2].str());
      std::replace(title.begin(), title.end(), '_', ' ');
      if (auto it = flaky_.find(title); it != flaky_.end() && it->second > 0) {
        --it->second;
        res.status = 429;
        return;
      }
      if (auto it = pages_.find(title); it != pages_.end()) {
        res.set_content(it->second, "text/html");
        return;
      }
      res.status = 404;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  void add(const std::string& title, const std::string& body) { pages_[title] = body; }
  void fail_first(const std::string& title, int times) { flaky_[title] = times; }
  std::vector<std::string> log() const {
    std::lock_guard lock(mutex_);
    return log_;
  }
  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mutex_;
  std::vector<std::string> log_;
  std::map<std::string, std::string> pages_;
  std::map<std::string, int> flaky_;
};

FetchPolicy local_policy(const FixtureServer& s) {
  FetchPolicy p;
  p.wikipedia_base = s.base();
  p.grokipedia_base = s.base();
  p.host_interval = std::chrono::milliseconds(0);
  p.backoff_initial = std::chrono::milliseconds(5);
  p.max_attempts = 3;
  p.timeout = std::chrono::seconds(5);
  return p;
}

TEST(Fetch, StoresBodyAndSidecar) {
  FixtureServer server;
  server.add("Tidal locking", "<main>tidal</main>");
  TempDir dir("acq");
  HttplibTransport transport;
  RateLimiter limiter(std::chrono::milliseconds(0));
  const auto doc = fetch_article("Tidal locking", Platform::kGrokipedia, dir.path(), local_policy(server),
                                 transport, limiter);
  EXPECT_EQ(doc.body, "<main>tidal</main>");
  EXPECT_EQ(doc.content_hash, sha256_hex(doc.body));
  EXPECT_EQ(doc.url, server.base() + "/page/Tidal_locking");
  const auto cached = load_cached("Tidal locking", Platform::kGrokipedia, dir.path());
  EXPECT_EQ(cached.body, doc.body);
  EXPECT_EQ(server.log(), std::vector<std::string>{"/page/Tidal_locking"});
}

TEST(Fetch, CacheHitMakesNoRequest) {
  FixtureServer server;
  server.add("Bread", "<p>bread</p>");
  TempDir dir("acq");
  HttplibTransport transport;
  RateLimiter limiter(std::chrono::milliseconds(0));
  const auto policy = local_policy(server);
  fetch_article("Bread", Platform::kWikipedia, dir.path(), policy, transport, limiter);
  fetch_article("Bread", Platform::kWikipedia, dir.path(), policy, transport, limiter);
  EXPECT_EQ(server.log().size(), 1u);
  auto refresh = policy;
  refresh.refresh = true;
  fetch_article("Bread", Platform::kWikipedia, dir.path(), refresh, transport, limiter);
  EXPECT_EQ(server.log().size(), 2u);
}

TEST(Fetch, NotFoundIsCachedAndReplayedOffline) {
  FixtureServer server;
  TempDir dir("acq");
  HttplibTransport transport;
  RateLimiter limiter(std::chrono::milliseconds(0));
  auto policy = local_policy(server);
  try {
    fetch_article("Nonexistent topic", Platform::kGrokipedia, dir.path(), policy, transport, limiter);
    FAIL() << "expected NOT_FOUND";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  policy.offline = true;
  try {
    fetch_article("Nonexistent topic", Platform::kGrokipedia, dir.path(), policy, transport, limiter);
    FAIL() << "expected NOT_FOUND";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_EQ(server.log().size(), 1u);
}

TEST(Fetch, RetriesRateLimitThenSucceeds) {
  FixtureServer server;
  server.add("Flaky", "ok");
  server.fail_first("Flaky", 2);
  TempDir dir("acq");
  HttplibTransport transport;
  RateLimiter limiter(std::chrono::milliseconds(0));
  const auto doc = fetch_article("Flaky", Platform::kWikipedia, dir.path(), local_policy(server), transport, limiter);
  EXPECT_EQ(doc.body, "ok");
  EXPECT_EQ(server.log().size(), 3u);
}

TEST(Fetch, GivesUpAsRateLimited) {
  FixtureServer server;
  server.add("Flaky", "ok");
  server.fail_first("Flaky", 10);
  TempDir dir("acq");
  HttplibTransport transport;
  RateLimiter limiter(std::chrono::milliseconds(0));
  try {
    fetch_article("Flaky", Platform::kWikipedia, dir.path(), local_policy(server), transport, limiter);
    FAIL() << "expected RATE_LIMITED";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRateLimited);
  }
  EXPECT_EQ(server.log().size(), 3u);
  EXPECT_FALSE(cache_has_entry(dir.path(), Platform::kWikipedia, "Flaky"));
}

TEST(Fetch, UnreachableHostIsNetworkError) {
  TempDir dir("acq");
  FetchPolicy policy;
  policy.wikipedia_base = "http://127.0.0.1:1";  // nothing listens on port 1
  policy.max_attempts = 2;
  policy.backoff_initial = std::chrono::milliseconds(1);
  policy.host_interval = std::chrono::milliseconds(0);
  HttplibTransport transport(std::chrono::seconds(2));
  RateLimiter limiter(std::chrono::milliseconds(0));
  try {
    fetch_article("X", Platform::kWikipedia, dir.path(), policy, transport, limiter);
    FAIL() << "expected NETWORK_ERROR";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetworkError);
  }
}

TEST(Fetch, OfflineCorpusRunNeverTouchesNetwork) {
  FixtureServer server;
  TempDir dir("acq");
  testing::build_fixture_cache(dir.path());
  auto policy = local_policy(server);
  policy.offline = true;
  HttplibTransport transport;
  std::vector<std::string> titles;
  for (const auto& t : load_topics(testing::e2e_dir() / "topics.tsv")) titles.push_back(t.title);
  const auto results = fetch_corpus(titles, dir.path(), policy, transport, 4);
  EXPECT_EQ(results.size(), 2 * titles.size());
  for (const auto& [key, outcome] : results) EXPECT_EQ(outcome.status, FetchStatus::kFetched);
  EXPECT_TRUE(server.log().empty());

  try {
    fetch_corpus({"Not in cache"}, dir.path(), policy, transport, 2);
    FAIL() << "expected CACHE_MISS";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCacheMiss);
  }
  EXPECT_TRUE(server.log().empty());
}

TEST(Fetch, CorpusMarksMissingPairs) {
  FixtureServer server;
  server.add("Both", "x");
  TempDir dir("acq");
  HttplibTransport transport;
  const auto results = fetch_corpus({"Both", "Nowhere"}, dir.path(), local_policy(server), transport, 3);
  EXPECT_EQ(results.at({"Both", Platform::kWikipedia}).status, FetchStatus::kFetched);
  EXPECT_EQ(results.at({"Nowhere", Platform::kGrokipedia}).status, FetchStatus::kMissing);
  EXPECT_EQ(results.at({"Nowhere", Platform::kGrokipedia}).error, ErrorCode::kNotFound);
}

TEST(Cache, TamperedBodyIsDigestMismatch) {
  TempDir dir("acq");
  RawDocument doc;
  doc.platform = Platform::kWikipedia;
  doc.title = "T";
  doc.url = "https://en.wikipedia.org/wiki/T";
  doc.fetched_at = "2025-11-02T00:00:00Z";
  doc.body = "original";
  doc.content_hash = sha256_hex(doc.body);
  store_document(dir.path(), doc);
  atomic_write(cache_paths(dir.path(), Platform::kWikipedia, "T").body, "edited");
  try {
    load_cached("T", Platform::kWikipedia, dir.path());
    FAIL() << "expected DIGEST_MISMATCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDigestMismatch);
  }
}

TEST(RateLimit, SameHostIsSpacedOtherHostsAreNot) {
  using Clock = std::chrono::steady_clock;
  RateLimiter limiter(std::chrono::milliseconds(40));
  const auto t0 = Clock::now();
  limiter.acquire("a.example");
  limiter.acquire("b.example");
  const auto after_two_hosts = Clock::now() - t0;
  limiter.acquire("a.example");
  limiter.acquire("a.example");
  const auto total = Clock::now() - t0;
  EXPECT_LT(after_two_hosts, std::chrono::milliseconds(30));
  EXPECT_GE(total, std::chrono::milliseconds(80));
}

TEST(RateLimit, ConcurrentSlotsNeverOverlap) {
  using Clock = std::chrono::steady_clock;
  RateLimiter limiter(std::chrono::milliseconds(15));
  std::vector<Clock::time_point> stamps(6);
  bounded_parallel_for(stamps.size(), 3, [&](std::size_t i) {
    limiter.acquire("one.example");
    stamps[i] = Clock::now();
  });
  std::sort(stamps.begin(), stamps.end());
  for (std::size_t i = 1; i < stamps.size(); ++i) {
    EXPECT_GE(stamps[i] - stamps[i - 1], std::chrono::milliseconds(14));
  }
}

TEST(Topics, ParsesFlagsAndComments) {
  const auto t = parse_topics("# header\nSPORTS\tNew York Yankees\n\nMUSIC\tList of songs\texclude\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].category, TopicCategory::kSports);
  EXPECT_TRUE(t[0].include);
  EXPECT_FALSE(t[1].include);
}

TEST(Topics, RejectsMalformedLines) {
  EXPECT_THROW(parse_topics("SPORTS\n"), Error);
  EXPECT_THROW(parse_topics("CHESS\tMagnus Carlsen\n"), Error);
  EXPECT_THROW(parse_topics("SPORTS\tA\nMUSIC\tA\n"), Error);
  EXPECT_THROW(parse_topics("SPORTS\tA\tmaybe\n"), Error);
}

TEST(Topics, BundledListHasSeventyTwoTitles) {
  const auto t = load_topics(testing::source_dir() / "data" / "topics_top72.tsv");
  EXPECT_EQ(t.size(), 72u);
  std::map<TopicCategory, int> n;
  for (const auto& e : t) ++n[e.category];
  EXPECT_EQ(n[TopicCategory::kSports], 17);
  EXPECT_EQ(n[TopicCategory::kGeographic], 16);
  EXPECT_EQ(n[TopicCategory::kPoliticsConflict], 15);
  EXPECT_EQ(n[TopicCategory::kGenKnowledgeSociety], 11);
  EXPECT_EQ(n[TopicCategory::kMusic], 9);
  EXPECT_EQ(n[TopicCategory::kMediaEntertainment], 4);
}

FetchResults all_fetched(const std::vector<TopicEntry>& topics) {
  FetchResults r;
  for (const auto& t : topics) {
    for (Platform p : kAllPlatforms) r[{t.title, p}] = {FetchStatus::kFetched, std::nullopt, ""};
  }
  return r;
}

TEST(Manifest, BucketsPartitionInput) {
  const auto topics = parse_topics(
      "SPORTS\tA\nSPORTS\tList of B\nMUSIC\tC\nMUSIC\tD\texclude\nGEOGRAPHIC\tList of E\n");
  auto results = all_fetched(topics);
  results[{"C", Platform::kGrokipedia}] = {FetchStatus::kMissing, ErrorCode::kNotFound, "404"};
  results[{"List of E", Platform::kWikipedia}] = {FetchStatus::kMissing, ErrorCode::kNotFound, "404"};
  const auto m = build_pair_manifest(topics, results);
  const auto s = m.summary();
  EXPECT_EQ(s.input, 5u);
  EXPECT_EQ(s.eligible, 1u);
  EXPECT_EQ(s.missing, 1u);
  EXPECT_EQ(s.excluded, 3u);
  EXPECT_EQ(s.eligible + s.missing + s.excluded, s.input);
  EXPECT_EQ(m.entries[1].status.at(Platform::kWikipedia), PairStatus::kExcludedListArticle);
  EXPECT_EQ(m.entries[4].status.at(Platform::kWikipedia), PairStatus::kMissing);
  ASSERT_EQ(m.eligible_topics().size(), 1u);
  EXPECT_EQ(m.eligible_topics()[0].title, "A");
}

TEST(Manifest, JsonRoundTrip) {
  const auto topics = parse_topics("SPORTS\tA\nMUSIC\tList of C\n");
  const auto m = build_pair_manifest(topics, all_fetched(topics));
  const auto back = manifest_from_json(to_json(m));
  EXPECT_EQ(to_json(back), to_json(m));
}

TEST(Manifest, NothingEligibleIsEmptyManifest) {
  const auto topics = parse_topics("SPORTS\tList of A\n");
  try {
    build_pair_manifest(topics, all_fetched(topics));
    FAIL() << "expected EMPTY_MANIFEST";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyManifest);
  }
}

}  // namespace
}  // namespace epiaudit
