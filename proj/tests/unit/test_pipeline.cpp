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

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "epiaudit/epiaudit.hpp"
#include "../support/fixture_corpus.hpp"

namespace epiaudit {
namespace {

using testing::TempDir;
using testing::e2e_dir;
using testing::fixture_config;
using testing::mock_model_reply;

enum class Settled { kRules, kModel, kLookThrough };

struct ExpectedLabel {
  EpistemicCategory category;
  Settled by;
};

Settled parse_settled(const std::string& s) {
  if (s == "rules") return Settled::kRules;
  if (s == "model") return Settled::kModel;
  if (s == "look-through") return Settled::kLookThrough;
  throw std::runtime_error("bad settled_by: " + s);
}
using LabelKey = std::tuple<Platform, std::string, std::size_t>;

std::map<LabelKey, ExpectedLabel> load_expected() {
  std::map<LabelKey, ExpectedLabel> out;
  std::istringstream in(read_file(e2e_dir() / "expected_labels.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 5) throw std::runtime_error("bad expected row: " + line);
    out[{parse_platform(f[0]), f[1], std::stoul(f[2])}] = {parse_category(f[3]), parse_settled(f[4])};
  }
  return out;
}

// Every regular file under `root`, keyed by relative path. The report
// timestamp is the one field allowed to differ between runs.
std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::string body = read_file(e.path());
    if (e.path().filename() == "report.json") {
      Json j = Json::parse(body);
      j["provenance"]["generated_at"] = "";
      body = canonical_dump(j);
    }
    files[fs::relative(e.path(), root).string()] = body;
  }
  return files;
}

struct HybridRun {
  TempDir work{"pipeline"};
  AuditConfig cfg = fixture_config(work.path());
  ScriptedClient client{mock_model_reply, "mock"};
  AuditReport report;

  HybridRun() {
    testing::build_fixture_cache(cfg.cache_dir);
    report = run_pipeline(cfg, PipelineDeps{nullptr, &client});
  }
  OutputLayout out() const { return OutputLayout{cfg.output_dir}; }
};

TEST(Pipeline, HybridRunMatchesHandLabels) {
  HybridRun run;
  const auto expected = load_expected();
  const auto labels = labels_from_jsonl(read_file(run.out().classifications()));
  ASSERT_EQ(labels.size(), expected.size());

  std::map<Platform, CategoryCounts> tally;
  std::size_t walked = 0;
  std::size_t looked_through = 0;
  for (const auto& l : labels) {
    const auto it = expected.find({l.platform, l.title, l.citation_index});
    ASSERT_NE(it, expected.end()) << l.title << " #" << l.citation_index;
    ASSERT_TRUE(l.result.has_value()) << l.title << " #" << l.citation_index << ": " << l.unresolved_reason;
    EXPECT_EQ(l.result->category, it->second.category) << to_string(l.platform) << " " << l.title << " #"
                                                       << l.citation_index;
    EXPECT_EQ(l.result->source == LabelSource::kLlm, it->second.by != Settled::kRules)
        << l.title << " #" << l.citation_index;
    ++tally[l.platform][index_of(l.result->category)];
    walked += it->second.by == Settled::kModel ? 1 : 0;
    looked_through += it->second.by == Settled::kLookThrough ? 1 : 0;
  }
  // Eight step prompts per walked citation, one question per look-through.
  EXPECT_EQ(run.client.calls(), walked * 8 + looked_through);

  const Json& gp = run.report.at("global_profile");
  for (Platform p : kAllPlatforms) {
    std::size_t total = 0;
    for (EpistemicCategory c : kAllCategories) {
      EXPECT_EQ(gp.at(to_string(p)).at("counts").at(to_string(c)).get<std::size_t>(), tally[p][index_of(c)])
          << to_string(p) << " " << to_string(c);
      total += tally[p][index_of(c)];
    }
    EXPECT_EQ(gp.at(to_string(p)).at("total").get<std::size_t>(), total);
  }
  EXPECT_EQ(run.report.at("classification").at("unresolvable").get<int>(), 0);
}

TEST(Pipeline, OutputsAreConsistent) {
  HybridRun run;
  const OutputLayout out = run.out();

  const std::string jsonl = read_file(out.classifications());
  EXPECT_EQ(labels_to_jsonl(labels_from_jsonl(jsonl)), jsonl);

  // The report on disk is exactly what run_pipeline returned.
  EXPECT_EQ(Json::parse(read_file(out.report())), run.report);

  const auto corpus = csv::parse(read_file(out.corpus_csv()));
  EXPECT_EQ(corpus.size(), 1 + 6u);
  const auto div = csv::parse(read_file(out.divergence_csv()));
  ASSERT_EQ(div.size(), 1 + 3u);

  // The summary lists articles from most to least divergent, matching the
  // divergence table.
  std::vector<std::pair<double, std::string>> rows;
  for (std::size_t i = 1; i < div.size(); ++i) rows.emplace_back(std::stod(div[i][2]), div[i][0]);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::string summary = read_file(out.summary());
  const std::size_t most = summary.find("Most divergent");
  const std::size_t least = summary.find("Least divergent");
  ASSERT_NE(most, std::string::npos);
  ASSERT_NE(least, std::string::npos);
  std::size_t at = most;
  for (const auto& [jsd, title] : rows) {
    const std::size_t pos = summary.find(title, at);
    ASSERT_NE(pos, std::string::npos) << title;
    EXPECT_LT(pos, least) << title;
    at = pos;
  }
}

TEST(Pipeline, RerunsAreIdentical) {
  HybridRun a;
  HybridRun b;
  const auto ta = snapshot_tree(a.cfg.output_dir);
  const auto tb = snapshot_tree(b.cfg.output_dir);
  ASSERT_EQ(ta.size(), tb.size());
  for (const auto& [name, body] : ta) {
    ASSERT_TRUE(tb.count(name)) << name;
    EXPECT_EQ(body, tb.at(name)) << name;
  }
}

TEST(Pipeline, ResumeFromEachLateStageReproducesOutputs) {
  HybridRun run;
  const auto before = snapshot_tree(run.cfg.output_dir);
  const OutputLayout out = run.out();
  for (Stage from : {Stage::kProfile, Stage::kMetrics, Stage::kAnalyze, Stage::kReport}) {
    SCOPED_TRACE(std::string(to_string(from)));
    if (from <= Stage::kProfile) {
      fs::remove(out.profiles());
      fs::remove(out.global_profile());
      fs::remove(out.descriptive_stats());
      fs::remove(out.category_means_csv());
    }
    if (from <= Stage::kMetrics) fs::remove_all(out.metrics_dir());
    if (from <= Stage::kAnalyze) {
      fs::remove_all(out.networks_dir());
      fs::remove_all(out.scaling_dir());
    }
    fs::remove(out.report());
    fs::remove(out.summary());
    run_pipeline(run.cfg, {}, from);
    EXPECT_EQ(snapshot_tree(run.cfg.output_dir), before);
  }
}

TEST(Pipeline, ResumeFromClassifyNeedsOnlyTheClient) {
  HybridRun run;
  const auto before = snapshot_tree(run.cfg.output_dir);
  ScriptedClient again(mock_model_reply, "mock");
  run_pipeline(run.cfg, PipelineDeps{nullptr, &again}, Stage::kClassify);
  EXPECT_EQ(snapshot_tree(run.cfg.output_dir), before);
  EXPECT_EQ(again.calls(), run.client.calls());
}

TEST(Pipeline, StaleSectionIsRejected) {
  HybridRun run;
  const OutputLayout out = run.out();
  Json tm = Json::parse(read_file(out.topic_metrics()));
  tm["snapshot_digest"] = std::string(64, '0');
  atomic_write(out.topic_metrics(), canonical_dump(tm));
  try {
    build_report(run.cfg);
    FAIL() << "expected DIGEST_MISMATCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDigestMismatch);
  }
  // Recomputing the stale stage clears the error.
  run_pipeline(run.cfg, {}, Stage::kMetrics);
  EXPECT_NO_THROW(build_report(run.cfg));
}

TEST(Pipeline, MissingTopicsFileFailsBeforeWriting) {
  TempDir work("badcfg");
  AuditConfig cfg = fixture_config(work.path());
  cfg.topics_file = work.path() / "nope.tsv";
  try {
    run_pipeline(cfg);
    FAIL() << "expected CONFIG_ERROR";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_FALSE(fs::exists(cfg.output_dir));
}

TEST(Pipeline, InvalidThresholdFailsBeforeWriting) {
  TempDir work("badthr");
  AuditConfig cfg = fixture_config(work.path());
  cfg.homophily_threshold = 1.0;
  EXPECT_THROW(run_pipeline(cfg), Error);
  EXPECT_FALSE(fs::exists(cfg.output_dir));
}

TEST(Pipeline, OfflineHybridWithoutClientIsAConfigError) {
  TempDir work("offline");
  AuditConfig cfg = fixture_config(work.path());
  testing::build_fixture_cache(cfg.cache_dir);
  try {
    run_pipeline(cfg);
    FAIL() << "expected CONFIG_ERROR";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

// -- command line ---------------------------------------------------------------------------

#ifdef EPIAUDIT_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + EPIAUDIT_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

TEST(Cli, OfflineRulesRunProducesReport) {
  TempDir work("cli");
  testing::build_fixture_cache(work.path() / "cache");
  const fs::path out = work.path() / "out";
  const int rc = run_cli("--topics " + q(e2e_dir() / "topics.tsv") + " --cache " + q(work.path() / "cache") +
                         " --out " + q(out) + " --resolver-fixture " + q(e2e_dir() / "resolver.json") +
                         " --classifier rules --offline --extremes-k 1 run");
  ASSERT_EQ(rc, 0);
  const Json report = Json::parse(read_file(OutputLayout{out}.report()));
  EXPECT_EQ(report.at("provenance").at("classifier"), "rules");
  EXPECT_EQ(report.at("manifest").at("eligible").get<int>(), 3);
  // Rules alone leave the four model-settled citations open.
  EXPECT_EQ(report.at("classification").at("unresolvable").get<int>(), 4);
}

TEST(Cli, MissingTopicsExitsWithConfigStatus) {
  TempDir work("cli");
  const fs::path out = work.path() / "out";
  EXPECT_EQ(run_cli("--topics " + q(work.path() / "absent.tsv") + " --out " + q(out) + " --offline run"), 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, UnknownStageIsRejected) {
  TempDir work("cli");
  EXPECT_NE(run_cli("--out " + q(work.path() / "out") + " run --from nowhere"), 0);
}
#endif

}  // namespace
}  // namespace epiaudit
