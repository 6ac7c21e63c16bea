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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/parallel.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/profiles/profiles.hpp"
#include "epiaudit/stats/divergence.hpp"

namespace epiaudit {

struct ArticleNode {
  std::string id;
  TopicCategory topic;
};

struct ArticleEdge {
  std::size_t a;  // node indices, a < b
  std::size_t b;
  double similarity;
};

struct ArticleGraph {
  std::vector<ArticleNode> nodes;
  std::vector<ArticleEdge> edges;  // sorted by (a, b)
  double threshold = 0.0;
};

// Edge between two articles iff their profile cosine similarity is
// strictly above `threshold`. Rows are computed in parallel and joined in
// order, so the edge list is deterministic.
inline ArticleGraph homophily_graph(const std::vector<const EpistemicProfile*>& profiles, double threshold,
                                    std::size_t max_workers = 1) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "homophily threshold must lie in (0, 1)");
  }
  ArticleGraph g;
  g.threshold = threshold;
  for (const auto* p : profiles) {
    if (!p->topic) throw Error(ErrorCode::kInvalidArgument, "article '" + p->title + "' has no topic category");
    if (!profiles.empty() && p->platform != profiles.front()->platform) {
      throw Error(ErrorCode::kInvalidArgument, "homophily graph mixes platforms");
    }
    g.nodes.push_back({p->title, *p->topic});
  }
  std::vector<std::vector<ArticleEdge>> rows(profiles.size());
  bounded_parallel_for(profiles.size(), max_workers, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      const double s = stats::cosine_similarity(profiles[i]->proportions, profiles[j]->proportions);
      if (s > threshold) rows[i].push_back({i, j, s});
    }
  });
  for (auto& row : rows) g.edges.insert(g.edges.end(), row.begin(), row.end());
  return g;
}

struct AssortativityResult {
  double r = 0.0;
  bool degenerate = false;  // 1 - sum(a_i b_i) == 0: all edge ends in one class
};

// Newman's discrete assortativity over edge ends.
inline AssortativityResult assortativity(const ArticleGraph& g) {
  if (g.edges.empty()) throw Error(ErrorCode::kInvalidArgument, "assortativity needs at least one edge");
  std::array<std::array<double, kTopicCount>, kTopicCount> e{};
  const double ends = 2.0 * static_cast<double>(g.edges.size());
  for (const auto& edge : g.edges) {
    const auto x = index_of(g.nodes[edge.a].topic);
    const auto y = index_of(g.nodes[edge.b].topic);
    e[x][y] += 1.0 / ends;
    e[y][x] += 1.0 / ends;
  }
  double trace = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    trace += e[i][i];
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < kTopicCount; ++j) {
      a += e[i][j];
      b += e[j][i];
    }
    ab += a * b;
  }
  AssortativityResult res;
  const double denom = 1.0 - ab;
  if (denom <= 1e-15) {
    res.degenerate = true;
    res.r = 1.0;
    return res;
  }
  res.r = (trace - ab) / denom;
  return res;
}

struct MixingMatrix {
  std::array<TopicCategory, kTopicCount> topics = kAllTopics;
  std::array<std::optional<std::array<double, kTopicCount>>, kTopicCount> rows{};  // absent: isolated topic
  std::vector<TopicCategory> isolated;
};

// Row-normalized edge-end counts by (topic of one end, topic of the other).
inline MixingMatrix mixing_matrix(const ArticleGraph& g) {
  if (g.edges.empty()) throw Error(ErrorCode::kInvalidArgument, "mixing matrix needs at least one edge");
  std::array<std::array<double, kTopicCount>, kTopicCount> counts{};
  for (const auto& edge : g.edges) {
    const auto x = index_of(g.nodes[edge.a].topic);
    const auto y = index_of(g.nodes[edge.b].topic);
    counts[x][y] += 1.0;
    counts[y][x] += 1.0;
  }
  MixingMatrix m;
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    double sum = 0.0;
    for (double v : counts[i]) sum += v;
    if (sum == 0.0) {
      m.isolated.push_back(kAllTopics[i]);
      continue;
    }
    std::array<double, kTopicCount> row{};
    for (std::size_t j = 0; j < kTopicCount; ++j) row[j] = counts[i][j] / sum;
    m.rows[i] = row;
  }
  return m;
}

// -- exports -------------------------------------------------------------------

inline Json to_json(const ArticleGraph& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) nodes.push_back(Json{{"id", n.id}, {"topic_category", std::string(to_string(n.topic))}});
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back(Json{{"source", g.nodes[e.a].id}, {"target", g.nodes[e.b].id}, {"similarity", e.similarity}});
  }
  return Json{{"threshold", g.threshold}, {"nodes", nodes}, {"edges", edges}};
}

inline std::string edges_csv(const ArticleGraph& g) {
  std::string out = csv::row({"source", "target", "weight"});
  for (const auto& e : g.edges) out += csv::row({g.nodes[e.a].id, g.nodes[e.b].id, format_number(e.similarity)});
  return out;
}

inline Json to_json(const MixingMatrix& m) {
  Json rows = Json::object();
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    const std::string key(to_string(m.topics[i]));
    if (!m.rows[i]) {
      rows[key] = nullptr;
      continue;
    }
    Json row = Json::object();
    for (std::size_t j = 0; j < kTopicCount; ++j) row[std::string(to_string(m.topics[j]))] = (*m.rows[i])[j];
    rows[key] = row;
  }
  Json isolated = Json::array();
  for (auto t : m.isolated) isolated.push_back(std::string(to_string(t)));
  return Json{{"rows", rows}, {"isolated_topics", isolated}};
}

inline std::string mixing_csv(const MixingMatrix& m) {
  std::vector<std::string> header{"topic"};
  for (auto t : m.topics) header.emplace_back(to_string(t));
  std::string out = csv::row(header);
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    std::vector<std::string> row{std::string(to_string(m.topics[i]))};
    for (std::size_t j = 0; j < kTopicCount; ++j) row.push_back(m.rows[i] ? format_number((*m.rows[i])[j]) : "");
    out += csv::row(row);
  }
  return out;
}

}  // namespace epiaudit
