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

#include <cmath>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/stats/descriptive.hpp"

namespace epiaudit::stats {

struct EffectSize {
  double mean_diff = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double sd = 0.0;
  double d = 0.0;  // d_z = mean / sd of the paired differences
  std::size_t n = 0;
};

// Paired Cohen's d (d_z) with a t-based 95% CI for the mean difference.
// No small-sample correction.
inline EffectSize paired_cohens_d(const std::vector<double>& diffs) {
  if (diffs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "paired_cohens_d needs n >= 2");
  // Checked on the data: the two-pass sd of equal values can come out as
  // rounding noise instead of 0.
  const bool constant = std::all_of(diffs.begin(), diffs.end(), [&](double v) { return v == diffs.front(); });
  const MeanCi ci = mean_ci(diffs, 0.95);
  if (constant || ci.sd == 0.0) throw Error(ErrorCode::kZeroVariance, "all paired differences are equal");
  EffectSize e;
  e.n = diffs.size();
  e.mean_diff = ci.mean;
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.sd = ci.sd;
  e.d = ci.mean / ci.sd;
  return e;
}

inline Json to_json(const EffectSize& e) {
  return Json{{"n", e.n}, {"mean_diff", e.mean_diff}, {"ci_low", e.ci_low},
              {"ci_high", e.ci_high}, {"sd", e.sd}, {"d", e.d}};
}

}  // namespace epiaudit::stats
