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

// Distribution functions needed for p-values and confidence intervals.
// Regularized incomplete gamma and beta use the usual series/continued
// fraction split (modified Lentz for the fractions).

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epiaudit/core/error.hpp"

namespace epiaudit::stats {

namespace special_detail {

inline constexpr int kMaxIter = 10000;
inline constexpr double kEps = 1e-16;
inline constexpr double kTiny = 1e-300;

// P(a, x) by its power series; converges fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by Legendre's continued fraction; for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for I_x(a, b); accurate for x < (a + 1) / (a + b + 2).
inline double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace special_detail

// Lower regularized incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::kInvalidArgument, "regularized_gamma_p: need a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return special_detail::gamma_p_series(a, x);
  return 1.0 - special_detail::gamma_q_fraction(a, x);
}

// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x), computed
// directly in the tail to keep relative accuracy.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::kInvalidArgument, "regularized_gamma_q: need a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - special_detail::gamma_p_series(a, x);
  return special_detail::gamma_q_fraction(a, x);
}

// Regularized incomplete beta I_x(a, b).
inline double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0 || std::isnan(x)) {
    throw Error(ErrorCode::kInvalidArgument, "regularized_beta: need a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * special_detail::beta_fraction(a, b, x) / a;
  return 1.0 - front * special_detail::beta_fraction(b, a, 1.0 - x) / b;
}

// Chi-square survival function P(X > x), X ~ chi2(df).
inline double chi2_sf(double x, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "chi2_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

inline double chi2_cdf(double x, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "chi2_cdf: df must be positive");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(df / 2.0, x / 2.0);
}

// Student t CDF.
inline double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_cdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_beta(df / (df + t * t), df / 2.0, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

// P(|T| > |t|).
inline double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_two_sided_p: df must be positive");
  if (std::isinf(t)) return 0.0;
  return regularized_beta(df / (df + t * t), df / 2.0, 0.5);
}

inline double t_pdf(double t, double df) {
  return std::exp(std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                  0.5 * std::log(df * std::numbers::pi) - (df + 1.0) / 2.0 * std::log1p(t * t / df));
}

// Inverse of t_cdf: bisection to bracket, Newton to polish.
inline double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidArgument, "t_quantile: p must be in (0, 1)");
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_quantile: df must be positive");
  if (p == 0.5) return 0.0;
  double lo = -1.0, hi = 1.0;
  while (t_cdf(lo, df) > p) lo *= 2.0;
  while (t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    const double f = t_cdf(t, df) - p;
    const double dens = t_pdf(t, df);
    if (dens <= 0.0) break;
    const double next = t - f / dens;
    if (!(next > lo && next < hi)) break;
    t = next;
  }
  return t;
}

}  // namespace epiaudit::stats
