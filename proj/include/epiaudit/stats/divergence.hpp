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
#include <span>
#include <string>
#include <vector>

#include "epiaudit/core/error.hpp"

namespace epiaudit::stats {

inline constexpr double kSimplexTolerance = 1e-9;

// Throws INVALID_SIMPLEX unless p is a probability vector.
inline void check_simplex(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorCode::kInvalidSimplex, "empty probability vector");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorCode::kInvalidSimplex, "negative or non-finite probability");
    }
    sum += x;
  }
  if (std::fabs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kInvalidSimplex, "probabilities sum to " + std::to_string(sum));
  }
}

namespace divergence_detail {
inline double entropy_unchecked(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}
}  // namespace divergence_detail

// Shannon entropy in bits, 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  check_simplex(p);
  return std::max(0.0, divergence_detail::entropy_unchecked(p));
}

// Jensen-Shannon divergence with base-2 logs: H(m) - (H(p) + H(q)) / 2.
inline double jensen_shannon_divergence(std::span<const double> p, std::span<const double> q) {
  check_simplex(p);
  check_simplex(q);
  if (p.size() != q.size()) throw Error(ErrorCode::kInvalidSimplex, "vectors differ in length");
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  const double jsd = divergence_detail::entropy_unchecked(m) -
                     0.5 * (divergence_detail::entropy_unchecked(p) + divergence_detail::entropy_unchecked(q));
  return std::clamp(jsd, 0.0, 1.0);
}

inline double cosine_similarity(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::kInvalidArgument, "vectors differ in length");
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    pp += p[i] * p[i];
    qq += q[i] * q[i];
  }
  if (pp == 0.0 || qq == 0.0) throw Error(ErrorCode::kZeroVector, "cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(pp) * std::sqrt(qq)), -1.0, 1.0);
}

}  // namespace epiaudit::stats
