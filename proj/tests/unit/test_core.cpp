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

#include <atomic>
#include <set>

#include "epiaudit/epiaudit.hpp"

namespace epiaudit {
namespace {

TEST(Url, ParsesSchemeHostPortPath) {
  const auto u = parse_url("HTTPS://News.BBC.co.uk:8443/news/world?x=1#frag");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->scheme, "https");
  EXPECT_EQ(u->host, "news.bbc.co.uk");
  EXPECT_EQ(u->port, 8443);
  EXPECT_EQ(u->path, "/news/world?x=1#frag");
}

TEST(Url, ProtocolRelativeIsHttps) {
  const auto u = parse_url("//doi.org/10.1/x");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->scheme, "https");
  EXPECT_EQ(u->host, "doi.org");
}

TEST(Url, RejectsNonHttp) {
  EXPECT_FALSE(parse_url("ftp://example.org/file"));
  EXPECT_FALSE(parse_url("/wiki/Relative"));
  EXPECT_FALSE(parse_url("mailto:someone@example.org"));
  EXPECT_FALSE(parse_url("http://host:12ab/"));
}

TEST(Url, RegistrableDomain) {
  EXPECT_EQ(registrable_domain("news.bbc.co.uk"), "bbc.co.uk");
  EXPECT_EQ(registrable_domain("www.nytimes.com"), "nytimes.com");
  EXPECT_EQ(registrable_domain("en.wikipedia.org"), "wikipedia.org");
  EXPECT_EQ(registrable_domain("ons.gov.uk"), "ons.gov.uk");
  EXPECT_EQ(registrable_domain("localhost"), "localhost");
  EXPECT_EQ(registrable_domain("127.0.0.1"), "127.0.0.1");
  EXPECT_EQ(registrable_domain("co.uk"), "co.uk");
}

TEST(Url, TitleEncodingRoundTrips) {
  for (std::string t : {"Tidal locking", "C++", "Brontë sisters", "AC/DC", "What? 100%"}) {
    std::string expected = t;
    for (char& c : expected) {
      if (c == ' ') c = '_';
    }
    EXPECT_EQ(decode_percent(encode_title(t)), expected);
  }
  EXPECT_EQ(encode_title("AC/DC"), "AC%2FDC");
}

TEST(Text, CollapseAndTrim) {
  EXPECT_EQ(collapse_whitespace("  a \n\t b   c  "), "a b c");
  EXPECT_EQ(trim("\t x y \n"), "x y");
  EXPECT_TRUE(contains_icase("Journal OF Physics", "journal of"));
  EXPECT_TRUE(starts_with_icase("List of rivers", "list OF"));
  EXPECT_EQ(split("a\tb\t", '\t'), (std::vector<std::string>{"a", "b", ""}));
}

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv::row({"a", "b,c", "say \"hi\"", "x\ny"}), "a,\"b,c\",\"say \"\"hi\"\"\",\"x\ny\"\n");
}

TEST(Csv, ParseInvertsRow) {
  const std::vector<std::vector<std::string>> rows = {
      {"title", "n"}, {"Guns N' Roses", "3"}, {"Hello, \"world\"", ""}, {"multi\nline", "1"}};
  std::string text;
  for (const auto& r : rows) text += csv::row(r);
  EXPECT_EQ(csv::parse(text), rows);
}

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fs, SlugIsStableAndCollisionFree) {
  EXPECT_EQ(slugify("Tidal locking"), slugify("Tidal locking"));
  EXPECT_NE(slugify("C++"), slugify("C#"));
  EXPECT_EQ(slugify("Tidal locking").substr(0, 13), "tidal-locking");
}

TEST(Fs, AtomicWriteReplacesContent) {
  const fs::path dir = fs::temp_directory_path() / "epiaudit-core-atomic";
  fs::remove_all(dir);
  atomic_write(dir / "sub" / "f.txt", "one");
  atomic_write(dir / "sub" / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "sub" / "f.txt"), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "sub"), fs::directory_iterator()), 1);
  fs::remove_all(dir);
}

TEST(Json, RoundsToSixSignificantDigits) {
  EXPECT_DOUBLE_EQ(round_significant(0.123456789), 0.123457);
  EXPECT_DOUBLE_EQ(round_significant(12345678.9), 12345700.0);
  EXPECT_DOUBLE_EQ(round_significant(-1.0000004), -1.0);
  const Json j = round_floats(Json{{"a", 1.23456789}, {"b", Json::array({2.0000001, 3})}, {"c", "x"}});
  EXPECT_DOUBLE_EQ(j["a"].get<double>(), 1.23457);
  EXPECT_DOUBLE_EQ(j["b"][0].get<double>(), 2.0);
  EXPECT_TRUE(j["b"][1].is_number_integer());
}

TEST(Json, CanonicalDumpSortsKeys) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  const std::string s = canonical_dump(j);
  EXPECT_LT(s.find("alpha"), s.find("zeta"));
  EXPECT_EQ(s.back(), '\n');
}

TEST(Json, NumberFormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(std::nan("")), "");
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  bounded_parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsFirstError) {
  EXPECT_THROW(bounded_parallel_for(10, 3,
                                    [](std::size_t i) {
                                      if (i == 5) throw Error(ErrorCode::kIo, "boom");
                                    }),
               Error);
}

TEST(Types, CategoryCodesFollowTreeOrder) {
  EXPECT_EQ(code_of(EpistemicCategory::kAcademic), 1);
  EXPECT_EQ(code_of(EpistemicCategory::kNews), 4);
  EXPECT_EQ(code_of(EpistemicCategory::kUgc), 8);
  for (auto c : kAllCategories) {
    EXPECT_EQ(category_from_code(code_of(c)), c);
    EXPECT_EQ(parse_category(to_string(c)), c);
    EXPECT_EQ(parse_category(display_name(c)), c);
  }
  EXPECT_EQ(parse_category(" 5 "), EpistemicCategory::kOpinion);
  EXPECT_THROW(parse_category("9"), Error);
  EXPECT_THROW(category_from_code(0), Error);
}

TEST(Types, TopicAndPlatformNames) {
  for (auto t : kAllTopics) EXPECT_EQ(parse_topic_category(to_string(t)), t);
  EXPECT_EQ(parse_platform("wikipedia"), Platform::kWikipedia);
  EXPECT_THROW(parse_platform("encarta"), Error);
}

TEST(Error, MessageCarriesCode) {
  const Error e(ErrorCode::kDigestMismatch, "file x");
  EXPECT_STREQ(e.what(), "DIGEST_MISMATCH: file x");
  EXPECT_EQ(e.code(), ErrorCode::kDigestMismatch);
}

}  // namespace
}  // namespace epiaudit
