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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epiaudit/acquisition/document.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/taxonomy/classifier.hpp"
#include "epiaudit/taxonomy/llm_client.hpp"

namespace epiaudit {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Stage { kFetch, kParse, kClassify, kProfile, kMetrics, kAnalyze, kReport };

inline constexpr Stage kAllStages[] = {Stage::kFetch,   Stage::kParse,   Stage::kClassify, Stage::kProfile,
                                       Stage::kMetrics, Stage::kAnalyze, Stage::kReport};

constexpr std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kFetch: return "fetch";
    case Stage::kParse: return "parse";
    case Stage::kClassify: return "classify";
    case Stage::kProfile: return "profile";
    case Stage::kMetrics: return "metrics";
    case Stage::kAnalyze: return "analyze";
    case Stage::kReport: return "report";
  }
  return "?";
}

struct AuditConfig {
  fs::path topics_file;
  fs::path cache_dir = "cache";
  fs::path output_dir = "audit-out";
  fs::path manual_file;       // coding manual used as the prompt asset
  fs::path resolver_fixture;  // optional; empty resolves tertiary pages through the cache
  fs::path overrides_file;    // optional JSONL of human label overrides
  ClassifierMode classifier = ClassifierMode::kHybrid;
  LlmEndpoint llm;
  std::size_t max_inflight = 4;
  std::size_t max_concurrency = 4;
  FetchPolicy fetch;
  double homophily_threshold = 0.75;
  std::vector<double> sensitivity_thresholds = {0.65, 0.75, 0.85};
  double alpha = 0.05;
  std::size_t extremes_k = 10;
  double density_bin_words = 1000.0;
  std::uint64_t seed = 0;  // nothing in the pipeline is random; recorded for self-tests
  int max_look_through = 2;
  int max_retries = 2;
};

// Checks everything a run starting at `first` needs before any output is
// written.
inline void validate_config(const AuditConfig& c, Stage first = Stage::kFetch) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfig, msg); };
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (first == Stage::kFetch) {
    if (c.topics_file.empty()) fail("topics file is not set");
    if (!fs::is_regular_file(c.topics_file)) fail("topics file not found: " + c.topics_file.string());
  }
  if (c.output_dir.empty()) fail("output dir is not set");
  if (c.cache_dir.empty()) fail("cache dir is not set");
  if (first <= Stage::kClassify) {
    if (c.classifier != ClassifierMode::kRules) {
      if (c.manual_file.empty()) fail("classifier mode " + std::string(to_string(c.classifier)) + " needs a coding manual");
      if (!fs::is_regular_file(c.manual_file)) fail("coding manual not found: " + c.manual_file.string());
    }
    if (!c.resolver_fixture.empty() && !fs::is_regular_file(c.resolver_fixture)) {
      fail("resolver fixture not found: " + c.resolver_fixture.string());
    }
    if (!c.overrides_file.empty() && !fs::is_regular_file(c.overrides_file)) {
      fail("overrides file not found: " + c.overrides_file.string());
    }
  }
  if (!in_unit(c.homophily_threshold)) fail("homophily threshold must lie in (0, 1)");
  if (c.sensitivity_thresholds.empty()) fail("sensitivity threshold set is empty");
  for (double t : c.sensitivity_thresholds) {
    if (!in_unit(t)) fail("sensitivity thresholds must lie in (0, 1)");
  }
  if (!in_unit(c.alpha)) fail("significance alpha must lie in (0, 1)");
  if (c.extremes_k == 0) fail("extremes k must be positive");
  if (!(c.density_bin_words > 0.0)) fail("density bin width must be positive");
  if (c.max_inflight == 0 || c.max_concurrency == 0) fail("concurrency limits must be positive");
}

// Settings that shape results, for the provenance block. Paths and
// secrets are left out so that relocating a run does not change it.
inline Json config_fingerprint(const AuditConfig& c) {
  return Json{{"classifier", std::string(to_string(c.classifier))},
              {"model", c.classifier == ClassifierMode::kRules ? "" : c.llm.model},
              {"homophily_threshold", c.homophily_threshold},
              {"sensitivity_thresholds", c.sensitivity_thresholds},
              {"alpha", c.alpha},
              {"extremes_k", c.extremes_k},
              {"density_bin_words", c.density_bin_words},
              {"max_look_through", c.max_look_through},
              {"max_retries", c.max_retries},
              {"seed", c.seed}};
}

}  // namespace epiaudit
