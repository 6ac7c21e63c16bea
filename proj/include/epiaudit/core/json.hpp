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
#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

namespace epiaudit {

using Json = nlohmann::json;

// Rounds to `digits` significant digits; used for report sections so that
// golden comparisons are insensitive to last-bit floating-point noise.
inline double round_significant(double value, int digits = 6) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::stod(buf);
}

// Recursively rounds every floating-point leaf of `j`.
inline Json round_floats(const Json& j, int digits = 6) {
  if (j.is_number_float()) return Json(round_significant(j.get<double>(), digits));
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_floats(it.value(), digits);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(round_floats(v, digits));
    return out;
  }
  return j;
}

// nlohmann::json objects are std::map backed, so keys always come out sorted.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json optional_to_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline std::optional<double> optional_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// Fixed formatting for CSV numbers: full round-trip precision.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace epiaudit
