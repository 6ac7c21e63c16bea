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
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/stats/descriptive.hpp"
#include "epiaudit/stats/special.hpp"

namespace epiaudit {

enum class ModelKind { kLinear, kQuadratic, kExponential };

constexpr std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::kLinear: return "LINEAR";
    case ModelKind::kQuadratic: return "QUADRATIC";
    case ModelKind::kExponential: return "EXPONENTIAL";
  }
  return "?";
}

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t = 0.0;
  double p_value = 1.0;
};

struct RegressionFit {
  ModelKind kind = ModelKind::kLinear;
  std::vector<Coefficient> coefficients;
  double r2 = 0.0;
  double r2_adj = 0.0;
  double rss = 0.0;
  std::size_t n = 0;

  const Coefficient& coef(std::string_view name) const {
    for (const auto& c : coefficients) {
      if (c.name == name) return c;
    }
    throw Error(ErrorCode::kInvalidArgument, "no coefficient '" + std::string(name) + "'");
  }

  // 95% CI of a coefficient, t with n - p df.
  std::pair<double, double> ci95(std::string_view name) const {
    const Coefficient& c = coef(name);
    const double df = static_cast<double>(n - coefficients.size());
    const double q = stats::t_quantile(0.975, df);
    return {c.estimate - q * c.std_error, c.estimate + q * c.std_error};
  }
};

namespace scaling_detail {

inline void fill_inference(Coefficient& c, double df) {
  if (c.std_error > 0.0) {
    c.t = c.estimate / c.std_error;
    c.p_value = stats::t_two_sided_p(c.t, df);
  } else {
    c.t = c.estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
    c.p_value = c.estimate == 0.0 ? 1.0 : 0.0;
  }
}

inline double total_ss(const std::vector<double>& y) {
  const double m = stats::mean(y);
  double tss = 0.0;
  for (double v : y) tss += (v - m) * (v - m);
  return tss;
}

}  // namespace scaling_detail

// Least squares for y = b0 + b1 x (+ b2 x^2). Solved by normal equations on
// the standardized regressor z = (x - mean) / sd, then mapped back to the
// raw scale together with the covariance matrix.
inline RegressionFit fit_ols(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (degree != 1 && degree != 2) throw Error(ErrorCode::kInvalidArgument, "fit_ols: degree must be 1 or 2");
  const std::size_t n = x.size();
  const std::size_t p = static_cast<std::size_t>(degree) + 1;
  if (y.size() != n) throw Error(ErrorCode::kInvalidArgument, "fit_ols: x and y differ in length");
  if (n < p + 1) throw Error(ErrorCode::kInvalidArgument, "fit_ols: need n >= degree + 2");

  const double mx = stats::mean(x);
  const double sx = stats::sample_sd(x);
  if (!(sx > 0.0)) throw Error(ErrorCode::kSingularDesign, "x is constant");

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (x[i] - mx) / sx;
    X(i, 0) = 1.0;
    X(i, 1) = z;
    if (degree == 2) X(i, 2) = z * z;
    Y(i) = y[i];
  }
  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) {
    throw Error(ErrorCode::kSingularDesign, "design matrix is collinear");
  }
  const Eigen::VectorXd bz = ldlt.solve(X.transpose() * Y);
  const Eigen::VectorXd resid = Y - X * bz;
  const double rss = resid.squaredNorm();
  const double df = static_cast<double>(n - p);
  const double sigma2 = rss / df;
  const Eigen::MatrixXd cov_z = sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(p, p));

  // Raw coefficients are T * bz.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(p, p);
  T(0, 0) = 1.0;
  T(0, 1) = -mx / sx;
  T(1, 1) = 1.0 / sx;
  if (degree == 2) {
    T(0, 2) = mx * mx / (sx * sx);
    T(1, 2) = -2.0 * mx / (sx * sx);
    T(2, 2) = 1.0 / (sx * sx);
  }
  const Eigen::VectorXd b = T * bz;
  const Eigen::MatrixXd cov = T * cov_z * T.transpose();

  RegressionFit fit;
  fit.kind = degree == 1 ? ModelKind::kLinear : ModelKind::kQuadratic;
  fit.n = n;
  fit.rss = rss;
  const char* names[] = {"intercept", "x", "x^2"};
  for (std::size_t j = 0; j < p; ++j) {
    Coefficient c;
    c.name = names[j];
    c.estimate = b(static_cast<Eigen::Index>(j));
    c.std_error = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
    scaling_detail::fill_inference(c, df);
    fit.coefficients.push_back(c);
  }
  const double tss = scaling_detail::total_ss(y);
  if (tss == 0.0) throw Error(ErrorCode::kZeroVariance, "y is constant");
  fit.r2 = 1.0 - rss / tss;
  fit.r2_adj = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / df;
  return fit;
}

// y = alpha * exp(beta x), fitted as a line on log y. R^2 is measured on the
// original y scale against the back-transformed predictions.
inline RegressionFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ly;
  ly.reserve(y.size());
  for (double v : y) {
    if (!(v > 0.0)) throw Error(ErrorCode::kNonpositiveY, "exponential fit needs y > 0");
    ly.push_back(std::log(v));
  }
  const RegressionFit log_fit = fit_ols(x, ly, 1);
  const double a = std::exp(log_fit.coefficients[0].estimate);
  const double beta = log_fit.coefficients[1].estimate;

  RegressionFit fit;
  fit.kind = ModelKind::kExponential;
  fit.n = x.size();
  Coefficient alpha_c = log_fit.coefficients[0];
  alpha_c.name = "alpha";
  alpha_c.estimate = a;
  alpha_c.std_error = a * log_fit.coefficients[0].std_error;  // delta method
  Coefficient beta_c = log_fit.coefficients[1];
  beta_c.name = "beta";
  fit.coefficients = {alpha_c, beta_c};  // t and p from the log-scale fit
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - a * std::exp(beta * x[i]);
    rss += r * r;
  }
  const double tss = scaling_detail::total_ss(y);
  if (tss == 0.0) throw Error(ErrorCode::kZeroVariance, "y is constant");
  fit.rss = rss;
  fit.r2 = 1.0 - rss / tss;
  fit.r2_adj = 1.0 - (1.0 - fit.r2) * static_cast<double>(fit.n - 1) / static_cast<double>(fit.n - 2);
  return fit;
}

struct EliminationStep {
  std::string term;
  double p_value = 1.0;
  bool dropped = false;
};

struct ModelSelection {
  std::vector<RegressionFit> candidates;  // quadratic, linear, exponential (when y > 0)
  ModelKind selected = ModelKind::kLinear;
  std::vector<EliminationStep> elimination_trace;
  std::optional<std::string> exponential_skipped;  // reason when not fitted

  const RegressionFit& fit(ModelKind kind) const {
    for (const auto& f : candidates) {
      if (f.kind == kind) return f;
    }
    throw Error(ErrorCode::kInvalidArgument, "no candidate of kind " + std::string(to_string(kind)));
  }
  const RegressionFit& selected_fit() const { return fit(selected); }
};

// Backward elimination over the x^2 term only: it is dropped when its
// p-value exceeds alpha.
inline ModelSelection select_scaling_model(const std::vector<double>& x, const std::vector<double>& y,
                                           double alpha = 0.05) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  ModelSelection sel;
  sel.candidates.push_back(fit_ols(x, y, 2));
  sel.candidates.push_back(fit_ols(x, y, 1));
  try {
    sel.candidates.push_back(fit_exponential(x, y));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonpositiveY) throw;
    sel.exponential_skipped = e.what();
  }
  const double p2 = sel.candidates[0].coef("x^2").p_value;
  const bool drop = p2 > alpha;
  sel.elimination_trace.push_back({"x^2", p2, drop});
  sel.selected = drop ? ModelKind::kLinear : ModelKind::kQuadratic;
  return sel;
}

// -- extremes ---------------------------------------------------------------------

struct CorpusRow {
  std::string title;
  Platform platform = Platform::kWikipedia;
  std::size_t words = 0;
  std::size_t citations = 0;
  std::optional<TopicCategory> topic;
};

struct ExtremesTable {
  Platform platform = Platform::kWikipedia;
  std::vector<CorpusRow> top;
  std::vector<CorpusRow> bottom;
  std::map<std::string, std::size_t> top_topics;     // topic -> count among top-k
  std::map<std::string, std::size_t> bottom_topics;
};

// Top-k and bottom-k by citation count per platform. Equal counts are
// ordered by title so the cut at rank k is deterministic.
inline std::vector<ExtremesTable> rank_extremes_report(const std::vector<CorpusRow>& corpus, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  std::vector<ExtremesTable> out;
  for (Platform platform : kAllPlatforms) {
    std::vector<CorpusRow> rows;
    for (const auto& r : corpus) {
      if (r.platform == platform) rows.push_back(r);
    }
    if (rows.empty()) continue;
    if (rows.size() < 2 * k) {
      throw Error(ErrorCode::kInsufficientCorpus, std::string(to_string(platform)) + " has " +
                                                      std::to_string(rows.size()) + " articles, need " +
                                                      std::to_string(2 * k));
    }
    ExtremesTable t;
    t.platform = platform;
    auto by_title = [](const CorpusRow& a, const CorpusRow& b) { return a.title < b.title; };
    std::vector<CorpusRow> desc = rows, asc = rows;
    std::sort(desc.begin(), desc.end(), [&](const CorpusRow& a, const CorpusRow& b) {
      return a.citations != b.citations ? a.citations > b.citations : by_title(a, b);
    });
    std::sort(asc.begin(), asc.end(), [&](const CorpusRow& a, const CorpusRow& b) {
      return a.citations != b.citations ? a.citations < b.citations : by_title(a, b);
    });
    t.top.assign(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(k));
    t.bottom.assign(asc.begin(), asc.begin() + static_cast<std::ptrdiff_t>(k));
    for (TopicCategory topic : kAllTopics) {
      t.top_topics[std::string(to_string(topic))] = 0;
      t.bottom_topics[std::string(to_string(topic))] = 0;
    }
    auto tally = [](const std::vector<CorpusRow>& rs, std::map<std::string, std::size_t>& hist) {
      for (const auto& r : rs) hist[r.topic ? std::string(to_string(*r.topic)) : "UNASSIGNED"]++;
    };
    tally(t.top, t.top_topics);
    tally(t.bottom, t.bottom_topics);
    out.push_back(std::move(t));
  }
  return out;
}

// Mean citation density per word-count bin; descriptive only.
struct DensityBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n = 0;
  double mean_density = 0.0;
};

inline std::vector<DensityBin> binned_density(const std::vector<CorpusRow>& rows, double width) {
  std::map<long, std::vector<double>> bins;
  for (const auto& r : rows) {
    if (r.words == 0) continue;
    const long b = static_cast<long>(std::floor(static_cast<double>(r.words) / width));
    bins[b].push_back(static_cast<double>(r.citations) / static_cast<double>(r.words) * 1000.0);
  }
  std::vector<DensityBin> out;
  for (const auto& [b, v] : bins) {
    out.push_back({static_cast<double>(b) * width, static_cast<double>(b + 1) * width, v.size(), stats::mean(v)});
  }
  return out;
}

// -- serialization ------------------------------------------------------------------

inline Json to_json(const RegressionFit& f) {
  Json coefs = Json::array();
  for (const auto& c : f.coefficients) {
    coefs.push_back(Json{{"name", c.name}, {"estimate", c.estimate}, {"std_error", c.std_error},
                         {"t", std::isfinite(c.t) ? Json(c.t) : Json(nullptr)}, {"p_value", c.p_value}});
  }
  return Json{{"model", std::string(to_string(f.kind))}, {"coefficients", coefs}, {"r2", f.r2},
              {"r2_adj", f.r2_adj}, {"rss", f.rss}, {"n", f.n}};
}

inline Json to_json(const ModelSelection& s) {
  Json cands = Json::array();
  for (const auto& f : s.candidates) cands.push_back(to_json(f));
  Json trace = Json::array();
  for (const auto& e : s.elimination_trace) {
    trace.push_back(Json{{"term", e.term}, {"p_value", e.p_value}, {"dropped", e.dropped}});
  }
  Json j{{"candidates", cands}, {"selected", std::string(to_string(s.selected))}, {"elimination_trace", trace}};
  j["exponential_skipped"] = s.exponential_skipped ? Json(*s.exponential_skipped) : Json(nullptr);
  return j;
}

inline Json to_json(const CorpusRow& r) {
  return Json{{"title", r.title}, {"words", r.words}, {"citations", r.citations},
              {"topic_category", r.topic ? Json(std::string(to_string(*r.topic))) : Json(nullptr)}};
}

inline Json to_json(const ExtremesTable& t) {
  Json top = Json::array(), bottom = Json::array();
  for (const auto& r : t.top) top.push_back(to_json(r));
  for (const auto& r : t.bottom) bottom.push_back(to_json(r));
  return Json{{"platform", std::string(to_string(t.platform))}, {"top", top}, {"bottom", bottom},
              {"top_topics", t.top_topics}, {"bottom_topics", t.bottom_topics}};
}

inline std::string extremes_csv(const std::vector<ExtremesTable>& tables) {
  std::string out = csv::row({"platform", "group", "rank", "title", "citations", "words", "topic_category"});
  for (const auto& t : tables) {
    auto emit = [&](const std::vector<CorpusRow>& rows, const char* group) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += csv::row({std::string(to_string(t.platform)), group, std::to_string(i + 1), r.title,
                         std::to_string(r.citations), std::to_string(r.words),
                         r.topic ? std::string(to_string(*r.topic)) : ""});
      }
    };
    emit(t.top, "top");
    emit(t.bottom, "bottom");
  }
  return out;
}

inline std::string scatter_csv(const std::vector<CorpusRow>& rows) {
  std::string out = csv::row({"title", "platform", "words", "citations"});
  for (const auto& r : rows) {
    out += csv::row({r.title, std::string(to_string(r.platform)), std::to_string(r.words), std::to_string(r.citations)});
  }
  return out;
}

}  // namespace epiaudit
