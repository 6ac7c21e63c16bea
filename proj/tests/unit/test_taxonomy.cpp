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

#include <random>

#include "epiaudit/epiaudit.hpp"
#include "epiaudit/synth/snapshot.hpp"
#include "../support/fixture_corpus.hpp"

namespace epiaudit {
namespace {

using C = EpistemicCategory;

CitationRecord cite(std::string text, std::vector<std::string> urls = {}) {
  CitationRecord c;
  c.index = 1;
  c.raw_text = std::move(text);
  c.urls = std::move(urls);
  if (!c.urls.empty()) {
    if (auto p = parse_url(c.urls.front())) c.domain = registrable_domain(p->host);
  }
  return c;
}

const PromptAsset& manual() {
  static const PromptAsset asset = load_prompt_asset(testing::source_dir() / "data" / "coding_manual.md");
  return asset;
}

ClassificationResult rules_only(const CitationRecord& c) {
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.mode = ClassifierMode::kRules;
  return classify_citation(c, resolver, nullptr, opt);
}

struct RuleCase {
  const char* name;
  const char* text;
  const char* url;
  C expected;
};

class DomainRules : public ::testing::TestWithParam<RuleCase> {};

TEST_P(DomainRules, SettlesWithoutModel) {
  const RuleCase& rc = GetParam();
  std::vector<std::string> urls;
  if (*rc.url) urls.emplace_back(rc.url);
  const auto r = rules_only(cite(rc.text, urls));
  EXPECT_EQ(r.category, rc.expected) << to_string(r.category);
  EXPECT_EQ(r.source, LabelSource::kRuleEngine);
  ASSERT_FALSE(r.rule_path.empty());
  // Steps 1..k in order; a tertiary leaf adds its look-through marker.
  const auto k = static_cast<std::size_t>(step_of(rc.expected));
  ASSERT_GE(r.rule_path.size(), k);
  EXPECT_EQ(r.rule_path[k - 1], "S" + std::to_string(k));
  EXPECT_EQ(r.rule_path.size(), rc.expected == C::kReferenceTertiary ? k + 1 : k);
}

INSTANTIATE_TEST_SUITE_P(
    Hosts, DomainRules,
    ::testing::Values(
        RuleCase{"doi", "Lee (2001). Paper.", "https://doi.org/10.1000/x", C::kAcademic},
        RuleCase{"doi_text", "Lee (2001). Paper. Physical Review. doi:10.1103/PhysRev.1", "", C::kAcademic},
        RuleCase{"journal_name", "Lee (2001). \"Paper\". Journal of Applied Things. 4 (2).", "", C::kAcademic},
        RuleCase{"us_gov", "Report.", "https://www.nasa.gov/missions/x", C::kGovernment},
        RuleCase{"uk_gov", "Guidance.", "https://assets.publishing.service.gov.uk/a.pdf", C::kGovernment},
        RuleCase{"think_tank", "Brief.", "https://www.rand.org/pubs/x.html", C::kNgoThinkTank},
        RuleCase{"news_wsj", "\"Fed raises rates\". The Wall Street Journal.", "https://www.wsj.com/articles/fed-1",
                 C::kNews},
        RuleCase{"news_name_only", "\"Election result\". Reuters. 3 May 2019.", "", C::kNews},
        RuleCase{"op_ed_marker", "\"The case for rates\" (Opinion). The Wall Street Journal.",
                 "https://www.wsj.com/opinion/case-1", C::kOpinion},
        RuleCase{"opinion_host", "Essay.", "https://www.nationalreview.com/2020/01/x/", C::kOpinion},
        RuleCase{"press_release", "\"Model Y launch\" (Press release). Tesla.", "https://www.tesla.com/blog/y",
                 C::kCorporate},
        RuleCase{"university_release", "\"Team finds X\" (Press release). Example University.",
                 "https://news.example.edu/2020/x", C::kCorporate},
        RuleCase{"britannica", "\"Tide\". Encyclopaedia Britannica.", "https://www.britannica.com/science/tide",
                 C::kReferenceTertiary},
        RuleCase{"reddit", "Thread.", "https://www.reddit.com/r/x/comments/1/", C::kUgc},
        RuleCase{"personal_blog", "Doe, J. \"Notes on tides\". Personal blog.", "https://jdoe.blogspot.com/2019/tides",
                 C::kUgc},
        RuleCase{"wayback", "Archived.", "https://web.archive.org/web/20200101000000/https://www.bbc.co.uk/news/x",
                 C::kNews}),
    [](const ::testing::TestParamInfo<RuleCase>& info) { return std::string(info.param.name); });

TEST(DomainRules, CorporateMarkerYieldsToOfficialHost) {
  EXPECT_EQ(rules_only(cite("\"Statement\" (Press release). The White House.",
                            {"https://www.whitehouse.gov/briefing/x"}))
                .category,
            C::kGovernment);
  EXPECT_EQ(rules_only(cite("\"Statement\" (Press release).", {"https://www.amnesty.org/en/latest/x"})).category,
            C::kNgoThinkTank);
}

TEST(DomainRules, OfficialJournalIsNotScholarly) {
  const Evidence ev = gather_evidence(cite("Regulation 2016/679. Official Journal of the European Union.",
                                           {"https://eur-lex.europa.eu/eli/reg/2016/679/oj"}));
  EXPECT_EQ(ev.decided(), C::kGovernment);
}

TEST(DomainRules, PlatformHostsGiveNoEvidence) {
  const Evidence ev = gather_evidence(cite("@someone (2021). \"lol\". X.", {"https://x.com/someone/status/1"}));
  EXPECT_TRUE(ev.platform_host);
  EXPECT_FALSE(ev.decided());
  EXPECT_EQ(local_verdict(ev, 1), Verdict::kUnknown);
}

TEST(DomainRules, RegistrableDomainMatchingIgnoresLookalikes) {
  // "notnytimes.com" must not count as nytimes.com.
  const Evidence ev = gather_evidence(cite("Page.", {"https://www.notnytimes.com/a"}));
  EXPECT_FALSE(ev.host);
}

TEST(DomainRules, EachSyntheticTemplateLandsInItsCategory) {
  std::mt19937_64 rng(11);
  for (C c : kAllCategories) {
    for (std::size_t n = 0; n < 25; ++n) {
      const auto s = synth::make_citation(c, n, rng);
      const auto r = rules_only(cite(s.text, {s.url}));
      EXPECT_EQ(r.category, c) << s.text;
    }
  }
}

// -- rules mode without evidence ----------------------------------------------

TEST(RulesMode, NoEvidenceIsUnresolvable) {
  try {
    rules_only(cite("Someone said something.", {"https://x.com/a/status/2"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnresolvable);
  }
}

TEST(RulesMode, EmptyCitationIsRejected) {
  try {
    rules_only(cite("   "));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(RulesMode, TertiaryWithoutSubjectStaysTertiary) {
  const auto r = rules_only(cite("\"Tide\". Encyclopaedia Britannica.", {"https://www.britannica.com/science/tide"}));
  EXPECT_EQ(r.rule_path.back(), "S7.LT.NOSUBJECT");
}

TEST(RulesMode, ModelModesNeedClient) {
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.mode = ClassifierMode::kHybrid;
  EXPECT_THROW(classify_citation(cite("x"), resolver, nullptr, opt), Error);
}

// -- hybrid engine ------------------------------------------------------------

int step_in(const std::string& prompt) {
  const auto pos = prompt.find("Question (Step ");
  return pos == std::string::npos ? 0 : prompt[pos + 15] - '0';
}

TEST(Hybrid, ClientAnswersOnlyUndecidedSteps) {
  FixtureResolver resolver;
  std::vector<int> asked;
  ScriptedClient client([&](const std::string& p) {
    asked.push_back(step_in(p));
    return std::string(step_in(p) == 8 ? "Answer: YES" : "Answer: NO");
  });
  ClassifierOptions opt;
  opt.asset = &manual();
  const auto r = classify_citation(cite("@someone: lol", {"https://x.com/someone/status/3"}), resolver, &client, opt);
  EXPECT_EQ(r.category, C::kUgc);
  EXPECT_EQ(r.source, LabelSource::kLlm);
  EXPECT_EQ(asked, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));

  // Decided locally: the client is never called.
  const auto before = client.calls();
  const auto n = classify_citation(cite("Report.", {"https://www.bbc.com/news/x"}), resolver, &client, opt);
  EXPECT_EQ(n.category, C::kNews);
  EXPECT_EQ(n.source, LabelSource::kRuleEngine);
  EXPECT_EQ(client.calls(), before);
}

TEST(Hybrid, PromptsCarryManualAndCitation) {
  const auto c = cite("Doe. \"Post\".", {"https://x.com/doe/status/9"});
  const std::string p = build_step_prompt(manual(), c, 4);
  EXPECT_NE(p.find(manual().manual_text.substr(0, 40)), std::string::npos);
  EXPECT_NE(p.find("Question (Step 4)"), std::string::npos);
  EXPECT_NE(p.find("https://x.com/doe/status/9"), std::string::npos);
  EXPECT_NE(build_look_through_prompt(manual(), c).find("Question (Look-through)"), std::string::npos);
}

TEST(Hybrid, MalformedRepliesRetryThenGiveUp) {
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.asset = &manual();
  opt.max_retries = 2;
  int n = 0;
  ScriptedClient flaky([&](const std::string&) { return std::string(n++ < 2 ? "maybe" : "Answer: YES"); });
  const auto r = classify_citation(cite("@a", {"https://x.com/a/status/1"}), resolver, &flaky, opt);
  EXPECT_EQ(r.category, C::kAcademic);
  EXPECT_EQ(flaky.calls(), 3u);

  ScriptedClient broken([](const std::string&) { return std::string("YES and NO"); });
  try {
    classify_citation(cite("@a", {"https://x.com/a/status/1"}), resolver, &broken, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnresolvable);
  }
  EXPECT_EQ(broken.calls(), 3u);
}

TEST(Hybrid, AllNoFallsBackToDirectLabel) {
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.asset = &manual();
  ScriptedClient client([](const std::string& p) {
    return std::string(step_in(p) ? "Answer: NO" : "Category: 4 (News & Journalism)\nConfidence: 0.7");
  });
  const auto r = classify_citation(cite("@a", {"https://x.com/a/status/1"}), resolver, &client, opt);
  EXPECT_EQ(r.category, C::kNews);
  EXPECT_EQ(r.rule_path.back(), "LLM");
  EXPECT_DOUBLE_EQ(r.confidence.value_or(0), 0.7);
}

// -- look-through ---------------------------------------------------------------

CitationRecord wiki_cite(const std::string& title) {
  CitationRecord c = cite("\"" + title + "\". Wikipedia.", {"https://en.wikipedia.org/wiki/" + encode_title(title)});
  return c;
}

TEST(LookThrough, SpecificWorkIsClassifiedAsTheWork) {
  FixtureResolver resolver;
  CitationRecord work;
  work.raw_text = "Smith, Adam (1776). An Inquiry into the Nature and Causes of the Wealth of Nations. "
                  "London: W. Strahan. Oxford University Press edition.";
  resolver.add_work("The Wealth of Nations", work);
  resolver.add_general("History of Japan");
  ClassifierOptions opt;
  opt.mode = ClassifierMode::kRules;

  const auto w = classify_citation(wiki_cite("The Wealth of Nations"), resolver, nullptr, opt);
  EXPECT_EQ(w.category, C::kAcademic);
  EXPECT_TRUE(w.look_through_applied);
  EXPECT_EQ(w.resolved_work, work.raw_text);
  EXPECT_EQ(w.rule_path, (std::vector<std::string>{"S1", "S2", "S3", "S4", "S5", "S6", "S7", "S7.LT", "S1"}));

  const auto h = classify_citation(wiki_cite("History of Japan"), resolver, nullptr, opt);
  EXPECT_EQ(h.category, C::kReferenceTertiary);
  EXPECT_FALSE(h.look_through_applied);
  EXPECT_EQ(h.rule_path.back(), "S7.LT");
}

TEST(LookThrough, UnknownSubjectAsksClient) {
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.asset = &manual();
  ScriptedClient client([](const std::string& p) {
    if (p.find("Question (Look-through)") != std::string::npos) {
      return std::string("Work: Darwin, C. (1859). On the Origin of Species. John Murray.");
    }
    return std::string(step_in(p) == 1 ? "Answer: YES" : "Answer: NO");
  });
  const auto r = classify_citation(wiki_cite("On the Origin of Species"), resolver, &client, opt);
  EXPECT_EQ(r.category, C::kAcademic);
  EXPECT_TRUE(r.look_through_applied);
  EXPECT_EQ(r.source, LabelSource::kLlm);
}

TEST(LookThrough, DepthCapStopsChains) {
  // Every resolved work is itself another encyclopedia page.
  class Chain final : public WorkResolver {
   public:
    Resolution resolve(const CitationRecord&) override {
      return {Resolution::Kind::kSpecificWork, wiki_cite("Next " + std::to_string(++n))};
    }
    int n = 0;
  } resolver;
  ClassifierOptions opt;
  opt.mode = ClassifierMode::kRules;
  opt.max_look_through = 2;
  const auto r = classify_citation(wiki_cite("Start"), resolver, nullptr, opt);
  EXPECT_EQ(r.category, C::kReferenceTertiary);
  EXPECT_TRUE(r.resolution_depth_exceeded);
  EXPECT_EQ(r.rule_path.back(), "S7.LT.DEPTH");
  EXPECT_EQ(resolver.n, 2);
}

TEST(LookThrough, InfoboxNamesAWork) {
  const auto tree = html::parse(
      "<table class=\"infobox\"><tr><th>Author</th><td>Adam Smith</td></tr>"
      "<tr><th>Publisher</th><td>W. Strahan</td></tr></table>");
  const auto w = resolver_detail::work_from_infobox(*tree, "The Wealth of Nations");
  ASSERT_TRUE(w);
  EXPECT_NE(w->raw_text.find("Adam Smith"), std::string::npos);
  const auto place = html::parse("<table class=\"infobox\"><tr><th>Country</th><td>Japan</td></tr></table>");
  EXPECT_FALSE(resolver_detail::work_from_infobox(*place, "Japan"));
}

// -- reply parsing --------------------------------------------------------------

TEST(Replies, LabelForms) {
  EXPECT_EQ(parse_llm_label("Category: NEWS").category, C::kNews);
  EXPECT_EQ(parse_llm_label("**Category:** 5 (Opinion & Advocacy)").category, C::kOpinion);
  EXPECT_EQ(parse_llm_label("Category: 8\nConfidence: 85%").category, C::kUgc);
  EXPECT_DOUBLE_EQ(parse_llm_label("Category: 8\nConfidence: 85%").confidence.value_or(0), 0.85);
  EXPECT_EQ(parse_llm_label("Reasoning: it is a journal.\nCategory: Academic & Scholarly").category, C::kAcademic);
  EXPECT_THROW(parse_llm_label("Category: News or Opinion"), Error);
  EXPECT_THROW(parse_llm_label("no idea"), Error);
  EXPECT_THROW(parse_llm_label("Category: 3 or 4"), Error);
}

TEST(Replies, YesNo) {
  EXPECT_TRUE(parse_yes_no("Answer: YES"));
  EXPECT_FALSE(parse_yes_no("Reasoning: not a yes case.\nAnswer: no"));
  EXPECT_THROW(parse_yes_no("unsure"), Error);
}

TEST(Replies, LookThrough) {
  EXPECT_EQ(parse_look_through_answer("Work: Smith (1776). Wealth of Nations."), "Smith (1776). Wealth of Nations.");
  EXPECT_FALSE(parse_look_through_answer("Answer: GENERAL"));
  EXPECT_THROW(parse_look_through_answer("hmm"), Error);
}

TEST(Manual, FrontMatter) {
  const auto a = parse_prompt_asset("---\nversion: 2.1\n---\nBody text\n");
  EXPECT_EQ(a.version, "2.1");
  EXPECT_EQ(a.manual_text, "Body text");
  EXPECT_EQ(a.digest, sha256_hex("Body text"));
  EXPECT_THROW(parse_prompt_asset("no front matter"), Error);
  EXPECT_FALSE(manual().version.empty());
}

// -- corpus level ----------------------------------------------------------------

TEST(Corpus, OrderOverridesAndJsonl) {
  std::mt19937_64 rng(3);
  std::vector<ParsedArticle> arts(2);
  for (std::size_t a = 0; a < arts.size(); ++a) {
    arts[a].title = "A" + std::to_string(a);
    for (std::size_t i = 0; i < 12; ++i) {
      const auto s = synth::make_citation(kAllCategories[(i + a) % kCategoryCount], i, rng);
      CitationRecord c = cite(s.text, {s.url});
      c.index = i + 1;
      arts[a].citations.push_back(c);
    }
  }
  arts[1].citations.push_back(cite("@x", {"https://x.com/x/status/1"}));
  arts[1].citations.back().index = 13;
  FixtureResolver resolver;
  ClassifierOptions opt;
  opt.mode = ClassifierMode::kRules;
  const std::vector<HumanOverride> ov = {{"A0", Platform::kWikipedia, 2, C::kUgc}};
  const auto serial = classify_corpus(arts, resolver, nullptr, opt, 1, ov);
  const auto parallel = classify_corpus(arts, resolver, nullptr, opt, 4, ov);
  EXPECT_EQ(serial, parallel);
  ASSERT_EQ(serial.size(), 25u);
  EXPECT_EQ(serial[1].result->source, LabelSource::kHumanOverride);
  EXPECT_EQ(serial[1].result->category, C::kUgc);
  EXPECT_EQ(serial[0].result->category, C::kAcademic);
  EXPECT_FALSE(serial.back().result);
  EXPECT_NE(serial.back().unresolved_reason.find("UNRESOLVABLE"), std::string::npos);
  EXPECT_EQ(labels_from_jsonl(labels_to_jsonl(serial)), serial);
}

// -- HTTP client ------------------------------------------------------------------

class RecordingTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string&, const HttpHeaders&) override { return {}; }
  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                    const std::string&) override {
    last_url = url;
    last_headers = headers;
    last_body = body;
    if (fail_remaining > 0) {
      --fail_remaining;
      return {503, "", ""};
    }
    return {200, R"j({"choices":[{"message":{"content":"Answer: YES (key sk-test-123 echoed)"}}]})j", ""};
  }
  std::string last_url, last_body;
  HttpHeaders last_headers;
  int fail_remaining = 0;
};

TEST(HttpClient, KeyFromEnvironmentNeverLogged) {
  testing::TempDir tmp("llm");
  ::setenv("EPIAUDIT_TEST_KEY", "sk-test-123", 1);
  auto transport = std::make_shared<RecordingTransport>();
  transport->fail_remaining = 1;
  LlmEndpoint ep;
  ep.base_url = "http://127.0.0.1:9";
  ep.api_key_env = "EPIAUDIT_TEST_KEY";
  ep.backoff_initial = std::chrono::milliseconds(1);
  ep.audit_log = tmp.path() / "llm.jsonl";
  HttpLlmClient client(ep, transport);
  const std::string reply = client.complete("hello");
  EXPECT_TRUE(parse_yes_no(reply));
  EXPECT_EQ(transport->last_headers.find("Authorization")->second, "Bearer sk-test-123");
  EXPECT_EQ(Json::parse(transport->last_body).at("temperature"), 0);
  const std::string log = read_file(ep.audit_log);
  EXPECT_EQ(log.find("sk-test-123"), std::string::npos);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 2);
  ::unsetenv("EPIAUDIT_TEST_KEY");
}

TEST(HttpClient, NonRetryableStatusFails) {
  class Reject final : public HttpTransport {
   public:
    HttpResponse get(const std::string&, const HttpHeaders&) override { return {}; }
    HttpResponse post(const std::string&, const HttpHeaders&, const std::string&, const std::string&) override {
      ++n;
      return {401, "{}", ""};
    }
    int n = 0;
  };
  auto t = std::make_shared<Reject>();
  HttpLlmClient client(LlmEndpoint{}, t);
  try {
    client.complete("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kClientError);
  }
  EXPECT_EQ(t->n, 1);
}

}  // namespace
}  // namespace epiaudit
