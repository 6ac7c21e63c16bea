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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epiaudit/agreement/agreement.hpp"
#include "epiaudit/core/csv.hpp"
#include "epiaudit/core/error.hpp"
#include "epiaudit/core/fs.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/text.hpp"
#include "epiaudit/core/types.hpp"

namespace epiaudit {

// key -> label. Unlabelled rows (UNRESOLVABLE, empty cells) are left out.
using LabelTable = std::map<std::string, EpistemicCategory>;

namespace agree_detail {
inline std::optional<EpistemicCategory> try_category(std::string_view s) {
  try {
    return parse_category(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}
}  // namespace agree_detail

// CSV: the last column is the label, the others form the key. A first row
// whose label does not parse is taken as a header.
// JSONL: either classification lines (title, platform, citation_index,
// category) or {"id": ..., "label": ...}.
inline LabelTable load_label_table(const fs::path& path) {
  const std::string text = read_file(path);
  LabelTable table;
  const std::string ext = to_lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".json") {
    for (const auto& line : split(text, '\n')) {
      if (trim(line).empty()) continue;
      const Json j = Json::parse(line);
      if (j.contains("id")) {
        table[j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump()] =
            parse_category(j.at("label").is_string() ? j.at("label").get<std::string>() : j.at("label").dump());
        continue;
      }
      if (j.value("status", std::string("CLASSIFIED")) != "CLASSIFIED") continue;
      const std::string key = j.at("title").get<std::string>() + "|" + j.at("platform").get<std::string>() + "|" +
                              std::to_string(j.at("citation_index").get<std::size_t>());
      table[key] = parse_category(j.at("category").get<std::string>());
    }
    return table;
  }
  const auto rows = csv::parse(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 2) {
      if (row.size() == 1 && trim(row[0]).empty()) continue;
      throw Error(ErrorCode::kParse, path.string() + ": row " + std::to_string(i + 1) + " has fewer than 2 columns");
    }
    const auto label = agree_detail::try_category(row.back());
    if (!label) {
      if (i == 0 || trim(row.back()).empty()) continue;
      throw Error(ErrorCode::kParse, path.string() + ": bad label '" + row.back() + "' on row " + std::to_string(i + 1));
    }
    std::string key;
    for (std::size_t c = 0; c + 1 < row.size(); ++c) key += (c ? "|" : "") + row[c];
    table[key] = *label;
  }
  return table;
}

struct AgreementRun {
  AgreementReport report;
  std::size_t only_reference = 0;
  std::size_t only_predicted = 0;
};

inline AgreementRun compare_label_tables(const LabelTable& reference, const LabelTable& predicted) {
  std::vector<EpistemicCategory> ref, pred;
  AgreementRun run;
  for (const auto& [key, label] : reference) {
    if (auto it = predicted.find(key); it != predicted.end()) {
      ref.push_back(label);
      pred.push_back(it->second);
    } else {
      ++run.only_reference;
    }
  }
  run.only_predicted = predicted.size() - ref.size();
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "reference and predicted labels share no item");
  run.report = agreement_report(ref, pred);
  return run;
}

inline Json to_json(const AgreementRun& run) {
  Json j = to_json(run.report);
  j["only_reference"] = run.only_reference;
  j["only_predicted"] = run.only_predicted;
  return j;
}

// items x raters grid; the first row names the raters, the first column
// names the items, empty cells are missing. Cells take any label form
// parse_category accepts.
inline LabelMatrix load_label_grid(const fs::path& path) {
  const auto rows = csv::parse(read_file(path));
  if (rows.size() < 2) throw Error(ErrorCode::kParse, path.string() + ": grid needs a header and one item");
  LabelMatrix m;
  m.raters.assign(rows[0].begin() + 1, rows[0].end());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() == 1 && trim(rows[i][0]).empty()) continue;
    if (rows[i].size() != rows[0].size()) {
      throw Error(ErrorCode::kParse, path.string() + ": row " + std::to_string(i + 1) + " has the wrong width");
    }
    m.items.push_back(rows[i][0]);
    std::vector<std::optional<int>> cells;
    for (std::size_t c = 1; c < rows[i].size(); ++c) {
      if (trim(rows[i][c]).empty()) {
        cells.emplace_back();
      } else {
        cells.emplace_back(code_of(parse_category(rows[i][c])));
      }
    }
    m.labels.push_back(std::move(cells));
  }
  m.validate();
  return m;
}

}  // namespace epiaudit
