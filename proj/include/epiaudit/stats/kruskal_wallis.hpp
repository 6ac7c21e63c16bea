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

#include <algorithm>
#include <numeric>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/stats/special.hpp"

namespace epiaudit::stats {

struct HTestResult {
  double h = 0.0;
  int df = 0;
  double p_value = 1.0;
  double tie_correction = 1.0;
  std::size_t n = 0;
};

// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> mid_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline HTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kInvalidArgument, "kruskal_wallis needs >= 2 groups");
  std::vector<double> all;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "kruskal_wallis: empty group");
    all.insert(all.end(), g.begin(), g.end());
  }
  const double n = static_cast<double>(all.size());
  if (all.size() < 3) throw Error(ErrorCode::kInvalidArgument, "kruskal_wallis needs N >= 3");

  const std::vector<double> ranks = mid_ranks(all);
  double sum_r2_over_n = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    sum_r2_over_n += r * r / static_cast<double>(g.size());
    offset += g.size();
  }

  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  HTestResult r;
  r.n = all.size();
  r.df = static_cast<int>(groups.size()) - 1;
  r.tie_correction = 1.0 - tie_sum / (n * n * n - n);
  if (r.tie_correction <= 0.0) throw Error(ErrorCode::kAllTied, "every observation is tied");
  const double h0 = 12.0 / (n * (n + 1.0)) * sum_r2_over_n - 3.0 * (n + 1.0);
  r.h = std::max(0.0, h0 / r.tie_correction);
  r.p_value = chi2_sf(r.h, r.df);
  return r;
}

inline Json to_json(const HTestResult& r) {
  return Json{{"H", r.h}, {"df", r.df}, {"p_value", r.p_value}, {"tie_correction", r.tie_correction}, {"n", r.n}};
}

}  // namespace epiaudit::stats
