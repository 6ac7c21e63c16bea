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
#include <numeric>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/stats/special.hpp"

namespace epiaudit::stats {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorCode::kInvalidArgument, "mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample (n - 1) standard deviation, two-pass.
inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) throw Error(ErrorCode::kInvalidArgument, "sample sd needs n >= 2");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct MeanCi {
  double mean = 0.0;
  double sd = 0.0;
  double low = 0.0;
  double high = 0.0;
  std::size_t n = 0;
};

// Mean with a t-based two-sided confidence interval (n - 1 df).
inline MeanCi mean_ci(const std::vector<double>& v, double level = 0.95) {
  if (v.size() < 2) throw Error(ErrorCode::kInvalidArgument, "confidence interval needs n >= 2");
  MeanCi r;
  r.n = v.size();
  r.mean = mean(v);
  r.sd = sample_sd(v);
  const double n = static_cast<double>(v.size());
  const double half = t_quantile(0.5 + level / 2.0, n - 1.0) * r.sd / std::sqrt(n);
  r.low = r.mean - half;
  r.high = r.mean + half;
  return r;
}

}  // namespace epiaudit::stats
