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

// Independent reference computations. Each one takes a different route
// from the library code it checks: other formulas, other summation order,
// long double where it helps, quadrature instead of special functions.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "epiaudit/agreement/agreement.hpp"

namespace epiaudit::testing {

// Entropy in nats converted to bits.
inline double entropy_oracle(const std::vector<double>& p) {
  long double h = 0.0L;
  for (double x : p) {
    if (x > 0.0) h -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
  }
  return static_cast<double>(h / std::numbers::ln2_v<long double>);
}

// JSD as the mean Kullback-Leibler divergence to the midpoint.
inline double jsd_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  long double kl_p = 0.0L, kl_q = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double m = (static_cast<long double>(p[i]) + q[i]) / 2.0L;
    if (p[i] > 0.0) kl_p += p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) kl_q += q[i] * std::log2(q[i] / m);
  }
  return static_cast<double>((kl_p + kl_q) / 2.0L);
}

inline double cosine_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  long double dot = 0.0L, pp = 0.0L, qq = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += static_cast<long double>(p[i]) * q[i];
    pp += static_cast<long double>(p[i]) * p[i];
    qq += static_cast<long double>(q[i]) * q[i];
  }
  return static_cast<double>(dot / std::sqrt(pp * qq));
}

// Welford running variance.
inline double d_oracle(const std::vector<double>& x) {
  long double mean = 0.0L, m2 = 0.0L;
  std::size_t n = 0;
  for (double v : x) {
    ++n;
    const long double delta = v - mean;
    mean += delta / n;
    m2 += delta * (v - mean);
  }
  return static_cast<double>(mean / std::sqrt(m2 / (n - 1)));
}

// H as the ratio of between-group to total rank variance, which carries
// the tie correction implicitly. Ranks by counting.
inline double kw_oracle(const std::vector<std::vector<double>>& groups) {
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  auto rank = [&](double v) {
    double less = 0.0, equal = 0.0;
    for (double w : all) {
      less += w < v;
      equal += w == v;
    }
    return less + (equal + 1.0) / 2.0;
  };
  const long double n = all.size();
  const long double rbar = (n + 1.0L) / 2.0L;
  long double between = 0.0L, total = 0.0L;
  for (const auto& g : groups) {
    long double sum = 0.0L;
    for (double v : g) {
      const long double r = rank(v);
      sum += r;
      total += (r - rbar) * (r - rbar);
    }
    const long double mean = sum / g.size();
    between += g.size() * (mean - rbar) * (mean - rbar);
  }
  return static_cast<double>((n - 1.0L) * between / total);
}

// Kappa from explicit p_o and p_e loops over the 8 codes.
inline double kappa_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  double po = 0.0, pe = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) po += a[i] == b[i];
  po /= n;
  for (int k = 1; k <= 8; ++k) {
    const double ca = static_cast<double>(std::count(a.begin(), a.end(), k));
    const double cb = static_cast<double>(std::count(b.begin(), b.end(), k));
    pe += ca * cb / (n * n);
  }
  return (po - pe) / (1.0 - pe);
}

// Categorical assortativity as Cohen's kappa over the symmetric list of
// edge ends: with both orientations listed the two marginals coincide and
// kappa reduces to Newman's coefficient. Classes must lie in 0..7.
inline double assortativity_oracle(const std::vector<int>& node_class,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<int> from, to;
  for (auto [a, b] : edges) {
    from.push_back(node_class[a] + 1);
    to.push_back(node_class[b] + 1);
    from.push_back(node_class[b] + 1);
    to.push_back(node_class[a] + 1);
  }
  return kappa_oracle(from, to);
}

// Alpha from the pooled list of pairable values, without a coincidence
// matrix. Ordered pairs inside a unit carry weight 1/(m_u - 1); expected
// disagreement runs over all ordered pairs of pooled values.
inline double alpha_oracle(const LabelMatrix& m, bool interval) {
  auto delta = [interval](int a, int b) {
    return interval ? static_cast<double>(a - b) * (a - b) : static_cast<double>(a != b);
  };
  std::vector<int> pooled;
  double within = 0.0;
  for (const auto& row : m.labels) {
    std::vector<int> v;
    for (const auto& x : row) {
      if (x) v.push_back(*x);
    }
    if (v.size() < 2) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (i != j) s += delta(v[i], v[j]);
      }
    }
    within += s / static_cast<double>(v.size() - 1);
    pooled.insert(pooled.end(), v.begin(), v.end());
  }
  const double n = static_cast<double>(pooled.size());
  double across = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i != j) across += delta(pooled[i], pooled[j]);
    }
  }
  return 1.0 - (n - 1.0) * within / across;
}

// OLS on the raw (uncentred) polynomial design, solved by Gauss-Jordan
// inversion of X'X in long double. Returns coefficients and standard errors.
struct OlsOracle {
  std::vector<double> beta;
  std::vector<double> se;
  double r2 = 0.0;
};

inline OlsOracle ols_oracle(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  const std::size_t p = static_cast<std::size_t>(degree) + 1, n = x.size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(2 * p, 0.0L));
  std::vector<long double> xty(p, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long double> row(p);
    for (std::size_t j = 0; j < p; ++j) row[j] = std::pow(static_cast<long double>(x[i]), static_cast<int>(j));
    for (std::size_t j = 0; j < p; ++j) {
      xty[j] += row[j] * y[i];
      for (std::size_t k = 0; k < p; ++k) a[j][k] += row[j] * row[k];
    }
  }
  for (std::size_t j = 0; j < p; ++j) a[j][p + j] = 1.0L;
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    const long double d = a[c][c];
    for (auto& v : a[c]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = a[r][c];
      for (std::size_t k = 0; k < 2 * p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  OlsOracle out;
  std::vector<long double> b(p, 0.0L);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) b[j] += a[j][p + k] * xty[k];
  }
  long double rss = 0.0L, my = 0.0L, tss = 0.0L;
  for (double v : y) my += v;
  my /= n;
  for (std::size_t i = 0; i < n; ++i) {
    long double fit = 0.0L;
    for (std::size_t j = 0; j < p; ++j) fit += b[j] * std::pow(static_cast<long double>(x[i]), static_cast<int>(j));
    rss += (y[i] - fit) * (y[i] - fit);
    tss += (y[i] - my) * (y[i] - my);
  }
  const long double sigma2 = rss / static_cast<long double>(n - p);
  for (std::size_t j = 0; j < p; ++j) {
    out.beta.push_back(static_cast<double>(b[j]));
    out.se.push_back(static_cast<double>(std::sqrt(sigma2 * a[j][p + j])));
  }
  out.r2 = static_cast<double>(1.0L - rss / tss);
  return out;
}

// -- quadrature ------------------------------------------------------------------

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                               int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double tol, int d) {
        const double mid = (lo + hi) / 2.0;
        const double lm = (lo + mid) / 2.0, rm = (mid + hi) / 2.0;
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, tol / 2.0, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, tol / 2.0, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2.0);
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

// Chi-square CDF by integrating the density after s = u^2, which removes
// the singularity at zero for df = 1.
inline double chi2_cdf_oracle(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double k = df / 2.0;
  const double log_c = -k * std::log(2.0) - std::lgamma(k);
  auto g = [&](double u) {
    if (u == 0.0) return df == 1.0 ? 2.0 * std::exp(log_c) : 0.0;
    return 2.0 * std::exp(log_c + (df - 1.0) * std::log(u) - u * u / 2.0);
  };
  return adaptive_simpson(g, 0.0, std::sqrt(x), 1e-13);
}

inline double t_cdf_oracle(double t, double df) {
  const double log_c =
      std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * std::numbers::pi);
  auto f = [&](double s) { return std::exp(log_c - (df + 1.0) / 2.0 * std::log(1.0 + s * s / df)); };
  const double half = adaptive_simpson(f, 0.0, std::fabs(t), 1e-13);
  return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

}  // namespace epiaudit::testing
