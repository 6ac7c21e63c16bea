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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/profiles/profiles.hpp"
#include "epiaudit/stats/divergence.hpp"

namespace epiaudit {

// Undirected weighted graph over epistemic categories; edges stored with
// a < b in canonical order, no self-loops, weights > 0.
struct CategoryEdge {
  EpistemicCategory a;
  EpistemicCategory b;
  double weight = 0.0;

  bool operator==(const CategoryEdge&) const = default;
};

struct CategoryGraph {
  std::vector<EpistemicCategory> nodes;  // canonical order
  std::vector<CategoryEdge> edges;       // sorted by (a, b)
  std::map<EpistemicCategory, double> node_strength;

  std::optional<double> weight(EpistemicCategory x, EpistemicCategory y) const {
    if (index_of(x) > index_of(y)) std::swap(x, y);
    for (const auto& e : edges) {
      if (e.a == x && e.b == y) return e.weight;
    }
    return std::nullopt;
  }
};

namespace networks_detail {

// Rebuilds nodes and strengths from the edge list; nodes without edges
// are dropped.
inline CategoryGraph from_edges(std::vector<CategoryEdge> edges) {
  CategoryGraph g;
  std::sort(edges.begin(), edges.end(), [](const CategoryEdge& l, const CategoryEdge& r) {
    return std::pair(index_of(l.a), index_of(l.b)) < std::pair(index_of(r.a), index_of(r.b));
  });
  g.edges = std::move(edges);
  for (const auto& e : g.edges) {
    g.node_strength[e.a] += e.weight;
    g.node_strength[e.b] += e.weight;
  }
  for (EpistemicCategory c : kAllCategories) {
    if (g.node_strength.count(c)) g.nodes.push_back(c);
  }
  return g;
}

}  // namespace networks_detail

// Edge weight = number of articles citing both categories at least once.
inline CategoryGraph co_occurrence_graph(const std::vector<const EpistemicProfile*>& profiles) {
  if (profiles.empty()) throw Error(ErrorCode::kInvalidArgument, "co_occurrence_graph needs >= 1 profile");
  std::array<std::array<std::size_t, kCategoryCount>, kCategoryCount> w{};
  for (const auto* p : profiles) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      if (p->counts[i] == 0) continue;
      for (std::size_t j = i + 1; j < kCategoryCount; ++j) {
        if (p->counts[j] > 0) ++w[i][j];
      }
    }
  }
  std::vector<CategoryEdge> edges;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    for (std::size_t j = i + 1; j < kCategoryCount; ++j) {
      if (w[i][j] > 0) edges.push_back({kAllCategories[i], kAllCategories[j], static_cast<double>(w[i][j])});
    }
  }
  return networks_detail::from_edges(std::move(edges));
}

inline double mean_edge_weight(const CategoryGraph& g) {
  if (g.edges.empty()) throw Error(ErrorCode::kInvalidArgument, "graph has no edges");
  double sum = 0.0;
  for (const auto& e : g.edges) sum += e.weight;
  return sum / static_cast<double>(g.edges.size());
}

// Keeps edges strictly heavier than the mean edge weight; isolated nodes
// go, strengths are recomputed on what remains.
inline CategoryGraph mean_filter_backbone(const CategoryGraph& g) {
  const double mean = mean_edge_weight(g);
  std::vector<CategoryEdge> kept;
  for (const auto& e : g.edges) {
    if (e.weight > mean) kept.push_back(e);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptyBackbone, "no edge is strictly above the mean weight");
  return networks_detail::from_edges(std::move(kept));
}

struct CosineBackbone {
  std::vector<CategoryEdge> similarities;  // every pair of non-constant columns, incl. 0
  double mean_similarity = 0.0;
  CategoryGraph backbone;                  // pairs strictly above the mean
  std::vector<EpistemicCategory> constant_columns;  // absent in every article
};

// Cosine similarity between category presence columns of the
// article x category matrix, filtered at the mean similarity.
inline CosineBackbone category_cosine_backbone(const std::vector<const EpistemicProfile*>& profiles) {
  if (profiles.size() < 2) throw Error(ErrorCode::kInvalidArgument, "category_cosine_backbone needs >= 2 articles");
  std::array<std::vector<double>, kCategoryCount> columns;
  for (const auto* p : profiles) {
    for (std::size_t c = 0; c < kCategoryCount; ++c) columns[c].push_back(p->counts[c] > 0 ? 1.0 : 0.0);
  }
  CosineBackbone out;
  std::vector<std::size_t> usable;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    if (std::all_of(columns[c].begin(), columns[c].end(), [](double v) { return v == 0.0; })) {
      out.constant_columns.push_back(kAllCategories[c]);
    } else {
      usable.push_back(c);
    }
  }
  if (usable.size() < 2) throw Error(ErrorCode::kConstantColumn, "fewer than two categories occur in the corpus");
  double sum = 0.0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    for (std::size_t j = i + 1; j < usable.size(); ++j) {
      const double s = stats::cosine_similarity(columns[usable[i]], columns[usable[j]]);
      out.similarities.push_back({kAllCategories[usable[i]], kAllCategories[usable[j]], s});
      sum += s;
    }
  }
  out.mean_similarity = sum / static_cast<double>(out.similarities.size());
  std::vector<CategoryEdge> kept;
  for (const auto& e : out.similarities) {
    if (e.weight > out.mean_similarity) kept.push_back(e);
  }
  out.backbone = networks_detail::from_edges(std::move(kept));
  return out;
}

// -- exports -------------------------------------------------------------------

inline Json to_json(const CategoryGraph& g) {
  Json nodes = Json::array();
  for (auto c : g.nodes) {
    nodes.push_back(Json{{"id", std::string(to_string(c))}, {"strength", g.node_strength.at(c)}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back(Json{{"source", std::string(to_string(e.a))}, {"target", std::string(to_string(e.b))}, {"weight", e.weight}});
  }
  return Json{{"nodes", nodes}, {"edges", edges}};
}

inline std::string edges_csv(const std::vector<CategoryEdge>& edges) {
  std::string out = csv::row({"source", "target", "weight"});
  for (const auto& e : edges) {
    out += csv::row({std::string(to_string(e.a)), std::string(to_string(e.b)), format_number(e.weight)});
  }
  return out;
}

}  // namespace epiaudit
