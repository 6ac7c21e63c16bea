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
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/types.hpp"

namespace epiaudit {

// -- Cohen's kappa -------------------------------------------------------------

struct KappaResult {
  double kappa = 0.0;
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e
  bool degenerate = false;  // p_e == 1: both raters constant and identical
};

template <class Label>
KappaResult cohen_kappa(const std::vector<Label>& a, const std::vector<Label>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cohen_kappa: need two equal-length, non-empty label vectors");
  }
  const double n = static_cast<double>(a.size());
  std::map<Label, double> ma, mb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1.0;
    mb[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  KappaResult r;
  r.observed = agree / n;
  for (const auto& [label, count] : ma) {
    if (auto it = mb.find(label); it != mb.end()) r.expected += (count / n) * (it->second / n);
  }
  if (r.expected >= 1.0 - 1e-15) {
    r.degenerate = true;
    r.kappa = 1.0;
    return r;
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

// -- Krippendorff's alpha --------------------------------------------------------

enum class AlphaMetric { kNominal, kInterval };

// items x raters grid of integer codes; nullopt marks a missing cell.
struct LabelMatrix {
  std::vector<std::string> items;
  std::vector<std::string> raters;
  std::vector<std::vector<std::optional<int>>> labels;

  void validate() const {
    if (raters.size() < 2) throw Error(ErrorCode::kInvalidArgument, "label matrix needs at least 2 raters");
    if (labels.size() != items.size()) throw Error(ErrorCode::kInvalidArgument, "label matrix: row count mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].size() != raters.size()) {
        throw Error(ErrorCode::kInvalidArgument, "label matrix: item '" + items[i] + "' has wrong width");
      }
      if (std::none_of(labels[i].begin(), labels[i].end(), [](const auto& v) { return v.has_value(); })) {
        throw Error(ErrorCode::kInvalidArgument, "label matrix: item '" + items[i] + "' has no labels");
      }
    }
  }
};

struct AlphaResult {
  double alpha = 0.0;
  double observed_disagreement = 0.0;  // D_o
  double expected_disagreement = 0.0;  // D_e
  double pairable_values = 0.0;        // n
  std::size_t pairable_items = 0;
  bool no_variation = false;  // D_e == 0
};

// Coincidence-matrix formulation. Items with fewer than two labels carry no
// pairable values and drop out.
inline AlphaResult krippendorff_alpha(const LabelMatrix& m, AlphaMetric metric = AlphaMetric::kNominal) {
  m.validate();
  std::map<int, std::map<int, double>> o;  // coincidences
  AlphaResult r;
  for (const auto& row : m.labels) {
    std::vector<int> values;
    for (const auto& v : row) {
      if (v) values.push_back(*v);
    }
    if (values.size() < 2) continue;
    ++r.pairable_items;
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (i != j) o[values[i]][values[j]] += w;
      }
    }
  }
  auto delta2 = [metric](int c, int k) {
    if (metric == AlphaMetric::kNominal) return c == k ? 0.0 : 1.0;
    const double d = static_cast<double>(c - k);
    return d * d;
  };
  std::map<int, double> marginal;
  double n = 0.0;
  for (const auto& [c, row] : o) {
    for (const auto& [k, v] : row) {
      marginal[c] += v;
      n += v;
    }
  }
  r.pairable_values = n;
  if (n <= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "krippendorff_alpha: fewer than two pairable values");
  }
  double d_o = 0.0;
  for (const auto& [c, row] : o) {
    for (const auto& [k, v] : row) d_o += v * delta2(c, k);
  }
  d_o /= n;
  double d_e = 0.0;
  for (const auto& [c, nc] : marginal) {
    for (const auto& [k, nk] : marginal) d_e += nc * nk * delta2(c, k);
  }
  d_e /= n * (n - 1.0);
  r.observed_disagreement = d_o;
  r.expected_disagreement = d_e;
  if (d_e <= 0.0) {
    r.no_variation = true;
    r.alpha = 1.0;
    return r;
  }
  r.alpha = 1.0 - d_o / d_e;
  return r;
}

// -- per-category precision / recall / F1 ------------------------------------------

struct CategoryScores {
  std::size_t support = 0;    // reference count
  std::size_t predicted = 0;  // prediction count
  std::size_t true_positive = 0;
  std::optional<double> precision;  // absent when never predicted
  std::optional<double> recall;     // absent when never in the reference
  std::optional<double> f1;         // absent only for an empty class
  bool empty_class = false;         // absent from both sides
};

using ConfusionMatrix = std::array<std::array<std::size_t, kCategoryCount>, kCategoryCount>;

struct AgreementReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  KappaResult kappa;
  AlphaResult alpha;  // nominal, two raters
  std::array<CategoryScores, kCategoryCount> per_category{};
  ConfusionMatrix confusion{};  // [reference][predicted]
};

inline AgreementReport category_prf(const std::vector<EpistemicCategory>& reference,
                                    const std::vector<EpistemicCategory>& predicted) {
  if (reference.size() != predicted.size() || reference.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "category_prf: need equal-length, non-empty label vectors");
  }
  AgreementReport r;
  r.n = reference.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto ri = index_of(reference[i]);
    const auto pi = index_of(predicted[i]);
    ++r.confusion[ri][pi];
    ++r.per_category[ri].support;
    ++r.per_category[pi].predicted;
    if (ri == pi) {
      ++r.per_category[ri].true_positive;
      ++correct;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);
  for (auto& s : r.per_category) {
    if (s.support == 0 && s.predicted == 0) {
      s.empty_class = true;
      continue;
    }
    const double tp = static_cast<double>(s.true_positive);
    if (s.predicted > 0) s.precision = tp / static_cast<double>(s.predicted);
    if (s.support > 0) s.recall = tp / static_cast<double>(s.support);
    // 2TP / (2TP + FP + FN): defined whenever the class occurs on either side.
    s.f1 = 2.0 * tp / static_cast<double>(s.support + s.predicted);
  }
  return r;
}

// Full two-rater comparison: kappa, nominal alpha and the per-category table.
inline AgreementReport agreement_report(const std::vector<EpistemicCategory>& reference,
                                        const std::vector<EpistemicCategory>& predicted) {
  AgreementReport r = category_prf(reference, predicted);
  r.kappa = cohen_kappa(reference, predicted);
  LabelMatrix m;
  m.raters = {"reference", "predicted"};
  for (std::size_t i = 0; i < reference.size(); ++i) {
    m.items.push_back(std::to_string(i));
    m.labels.push_back({code_of(reference[i]), code_of(predicted[i])});
  }
  r.alpha = krippendorff_alpha(m, AlphaMetric::kNominal);
  return r;
}

inline Json to_json(const AgreementReport& r) {
  Json j;
  j["n"] = r.n;
  j["accuracy"] = r.accuracy;
  j["kappa"] = r.kappa.kappa;
  j["kappa_degenerate"] = r.kappa.degenerate;
  j["alpha"] = r.alpha.alpha;
  j["alpha_no_variation"] = r.alpha.no_variation;
  Json per = Json::object();
  for (EpistemicCategory c : kAllCategories) {
    const auto& s = r.per_category[index_of(c)];
    Json e;
    e["support"] = s.support;
    e["predicted"] = s.predicted;
    e["precision"] = optional_to_json(s.precision);
    e["recall"] = optional_to_json(s.recall);
    e["f1"] = optional_to_json(s.f1);
    e["empty_class"] = s.empty_class;
    per[std::string(to_string(c))] = e;
  }
  j["per_category"] = per;
  Json conf = Json::array();
  for (const auto& row : r.confusion) conf.push_back(Json(std::vector<std::size_t>(row.begin(), row.end())));
  j["confusion"] = conf;
  j["confusion_order"] = [] {
    Json order = Json::array();
    for (EpistemicCategory c : kAllCategories) order.push_back(std::string(to_string(c)));
    return order;
  }();
  return j;
}

}  // namespace epiaudit
