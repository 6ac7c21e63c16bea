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
#include <string_view>
#include <utility>
#include <vector>

#include "epiaudit/core/error.hpp"
#include "epiaudit/core/json.hpp"
#include "epiaudit/core/parallel.hpp"
#include "epiaudit/core/types.hpp"
#include "epiaudit/parsing/article.hpp"
#include "epiaudit/taxonomy/domain_rules.hpp"
#include "epiaudit/taxonomy/llm_client.hpp"
#include "epiaudit/taxonomy/prompt.hpp"
#include "epiaudit/taxonomy/resolver.hpp"

namespace epiaudit {

enum class ClassifierMode {
  kRules,   // local evidence only; undecidable steps make the citation UNRESOLVABLE
  kHybrid,  // local evidence, the client answers the steps rules cannot
  kLlm,     // every citation goes to the client as one classification request
};

constexpr std::string_view to_string(ClassifierMode m) {
  switch (m) {
    case ClassifierMode::kRules: return "rules";
    case ClassifierMode::kHybrid: return "hybrid";
    case ClassifierMode::kLlm: return "llm";
  }
  return "?";
}

inline ClassifierMode parse_classifier_mode(std::string_view s) {
  const std::string l = to_lower(s);
  if (l == "rules") return ClassifierMode::kRules;
  if (l == "hybrid") return ClassifierMode::kHybrid;
  if (l == "llm") return ClassifierMode::kLlm;
  throw Error(ErrorCode::kConfig, "unknown classifier mode '" + std::string(s) + "'");
}

enum class LabelSource { kRuleEngine, kLlm, kHumanOverride };

constexpr std::string_view to_string(LabelSource s) {
  switch (s) {
    case LabelSource::kRuleEngine: return "RULE_ENGINE";
    case LabelSource::kLlm: return "LLM";
    case LabelSource::kHumanOverride: return "HUMAN_OVERRIDE";
  }
  return "?";
}

inline LabelSource parse_label_source(std::string_view s) {
  if (s == "RULE_ENGINE") return LabelSource::kRuleEngine;
  if (s == "LLM") return LabelSource::kLlm;
  if (s == "HUMAN_OVERRIDE") return LabelSource::kHumanOverride;
  throw Error(ErrorCode::kParse, "unknown label source '" + std::string(s) + "'");
}

// Step ids in rule_path: "S1".."S8" for tree steps, "S7.LT" for each
// look-through, "S7.LT.DEPTH" when the depth cap stopped it, and "LLM" for
// a whole-citation model decision.
struct ClassificationResult {
  std::size_t citation_index = 0;
  EpistemicCategory category = EpistemicCategory::kAcademic;
  std::vector<std::string> rule_path;
  bool look_through_applied = false;
  bool resolution_depth_exceeded = false;
  LabelSource source = LabelSource::kRuleEngine;
  std::optional<double> confidence;
  std::optional<std::string> resolved_work;  // raw text of the looked-through work

  bool operator==(const ClassificationResult&) const = default;
};

struct ClassifierOptions {
  ClassifierMode mode = ClassifierMode::kHybrid;
  int max_retries = 2;         // extra attempts after a malformed reply
  int max_look_through = 2;    // look-throughs allowed per citation
  const PromptAsset* asset = nullptr;  // required whenever a client is used
};

struct LookThrough {
  CitationRecord record;
  bool specific_work = false;
  bool resolved = false;  // false: neither resolver nor client could tell
};

// Golden Rule 2. With a specific underlying work, returns a record that
// describes that work; otherwise returns the input unchanged.
inline LookThrough apply_look_through(const CitationRecord& c, WorkResolver& resolver) {
  const Resolution r = resolver.resolve(c);
  LookThrough out{c, false, r.kind != Resolution::Kind::kUnknown};
  if (r.kind == Resolution::Kind::kSpecificWork) {
    out.record = r.work;
    out.record.index = c.index;
    out.specific_work = true;
  }
  return out;
}

namespace classifier_detail {

class Engine {
 public:
  Engine(WorkResolver& resolver, LlmClient* client, const ClassifierOptions& opt)
      : resolver_(resolver), client_(client), opt_(opt) {
    if (client_ && !opt_.asset) {
      throw Error(ErrorCode::kInvalidArgument, "a prompt asset is required with an LLM client");
    }
    if (opt_.mode != ClassifierMode::kRules && !client_) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("classifier mode '") + std::string(to_string(opt_.mode)) + "' needs a client");
    }
  }

  ClassificationResult run(const CitationRecord& c) {
    result_ = ClassificationResult{};
    result_.citation_index = c.index;
    if (opt_.mode == ClassifierMode::kLlm) {
      whole_citation(c);
    } else {
      walk(c, 0);
    }
    return result_;
  }

 private:
  // Retries malformed replies, then gives up as UNRESOLVABLE.
  template <class Parse>
  auto ask(const std::string& prompt, Parse&& parse) -> decltype(parse(std::string_view())) {
    used_client_ = true;
    for (int attempt = 0;; ++attempt) {
      const std::string reply = client_->complete(prompt);
      try {
        return parse(reply);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kMalformedResponse) throw;
        if (attempt >= opt_.max_retries) {
          throw Error(ErrorCode::kUnresolvable, "model reply unusable after retries: " + std::string(e.what()));
        }
      }
    }
  }

  void finish(EpistemicCategory cat) {
    result_.category = cat;
    result_.source = used_client_ ? LabelSource::kLlm : LabelSource::kRuleEngine;
  }

  void whole_citation(const CitationRecord& c) {
    const LabelAnswer a = ask(build_classifier_prompt(*opt_.asset, c),
                              [](std::string_view r) { return parse_llm_label(r); });
    result_.rule_path.push_back("LLM");
    result_.confidence = a.confidence;
    finish(a.category);
  }

  void walk(const CitationRecord& c, int depth) {
    const Evidence ev = gather_evidence(c);
    for (int step = 1; step <= 8; ++step) {
      Verdict v = local_verdict(ev, step);
      if (v == Verdict::kUnknown) {
        if (!client_) {
          throw Error(ErrorCode::kUnresolvable,
                      "no local evidence at step " + std::to_string(step) + " and no client");
        }
        v = ask(build_step_prompt(*opt_.asset, c, step),
                [](std::string_view r) { return parse_yes_no(r); })
                ? Verdict::kYes
                : Verdict::kNo;
      }
      result_.rule_path.push_back("S" + std::to_string(step));
      if (v == Verdict::kNo) continue;
      if (step != step_of(EpistemicCategory::kReferenceTertiary)) {
        finish(kAllCategories[static_cast<std::size_t>(step - 1)]);
        return;
      }
      look_through(c, depth);
      return;
    }
    // Every step answered NO: the tree has no leaf, ask for a direct label.
    if (!client_) throw Error(ErrorCode::kUnresolvable, "all decision steps answered NO");
    whole_citation(c);
  }

  void look_through(const CitationRecord& c, int depth) {
    if (depth >= opt_.max_look_through) {
      result_.rule_path.push_back("S7.LT.DEPTH");
      result_.resolution_depth_exceeded = true;
      finish(EpistemicCategory::kReferenceTertiary);
      return;
    }
    LookThrough lt = apply_look_through(c, resolver_);
    if (!lt.resolved) {
      if (!client_) {
        // No subject page to look through: the tertiary source itself is
        // what is cited.
        if (!tertiary_subject(c)) {
          result_.rule_path.push_back("S7.LT.NOSUBJECT");
          finish(EpistemicCategory::kReferenceTertiary);
          return;
        }
        throw Error(ErrorCode::kUnresolvable, "tertiary page could not be resolved and no client");
      }
      const auto work = ask(build_look_through_prompt(*opt_.asset, c),
                            [](std::string_view r) { return parse_look_through_answer(r); });
      if (work) {
        lt.record = CitationRecord{};
        lt.record.index = c.index;
        lt.record.raw_text = *work;
        lt.specific_work = true;
      }
    }
    result_.rule_path.push_back("S7.LT");
    if (!lt.specific_work) {
      finish(EpistemicCategory::kReferenceTertiary);
      return;
    }
    result_.look_through_applied = true;
    result_.resolved_work = lt.record.raw_text;
    walk(lt.record, depth + 1);
  }

  WorkResolver& resolver_;
  LlmClient* client_;
  const ClassifierOptions& opt_;
  ClassificationResult result_;
  bool used_client_ = false;
};

}  // namespace classifier_detail

// Runs the decision tree on one citation. Throws UNRESOLVABLE when neither
// local evidence nor the client settles it, CLIENT_ERROR on transport
// failure.
inline ClassificationResult classify_citation(const CitationRecord& c, WorkResolver& resolver,
                                              LlmClient* client, const ClassifierOptions& options) {
  if (trim(c.raw_text).empty() && c.urls.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "citation has neither text nor URL");
  }
  classifier_detail::Engine engine(resolver, client, options);
  return engine.run(c);
}

// -- corpus level ----------------------------------------------------------------

// One line of classifications.jsonl. `result` is empty for citations that
// ended UNRESOLVABLE.
struct CitationLabel {
  std::string title;
  Platform platform = Platform::kWikipedia;
  std::size_t citation_index = 0;
  std::optional<ClassificationResult> result;
  std::string unresolved_reason;

  bool operator==(const CitationLabel&) const = default;
};

struct HumanOverride {
  std::string title;
  Platform platform;
  std::size_t citation_index;
  EpistemicCategory category;
};

// Classifies every citation of every article, up to `max_inflight` at a
// time. Output order follows the input (article, then citation index), so
// the result does not depend on scheduling.
inline std::vector<CitationLabel> classify_corpus(const std::vector<ParsedArticle>& articles,
                                                  WorkResolver& resolver, LlmClient* client,
                                                  const ClassifierOptions& options,
                                                  std::size_t max_inflight,
                                                  const std::vector<HumanOverride>& overrides = {}) {
  std::vector<std::pair<const ParsedArticle*, const CitationRecord*>> work;
  for (const auto& a : articles) {
    for (const auto& c : a.citations) work.emplace_back(&a, &c);
  }
  std::map<std::tuple<std::string, Platform, std::size_t>, EpistemicCategory> forced;
  for (const auto& o : overrides) forced[{o.title, o.platform, o.citation_index}] = o.category;

  std::vector<CitationLabel> out(work.size());
  bounded_parallel_for(work.size(), max_inflight, [&](std::size_t i) {
    const auto& [article, citation] = work[i];
    CitationLabel& label = out[i];
    label.title = article->title;
    label.platform = article->platform;
    label.citation_index = citation->index;
    if (auto it = forced.find({article->title, article->platform, citation->index}); it != forced.end()) {
      ClassificationResult r;
      r.citation_index = citation->index;
      r.category = it->second;
      r.rule_path = {"OVERRIDE"};
      r.source = LabelSource::kHumanOverride;
      label.result = std::move(r);
      return;
    }
    try {
      label.result = classify_citation(*citation, resolver, client, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnresolvable && e.code() != ErrorCode::kInvalidArgument) throw;
      label.unresolved_reason = e.what();
    }
  });
  return out;
}

// -- serialization -----------------------------------------------------------------

inline Json to_json(const CitationLabel& l) {
  Json j;
  j["title"] = l.title;
  j["platform"] = std::string(to_string(l.platform));
  j["citation_index"] = l.citation_index;
  if (!l.result) {
    j["status"] = "UNRESOLVABLE";
    j["reason"] = l.unresolved_reason;
    return j;
  }
  const auto& r = *l.result;
  j["status"] = "CLASSIFIED";
  j["category"] = std::string(to_string(r.category));
  j["code"] = code_of(r.category);
  j["rule_path"] = r.rule_path;
  j["look_through_applied"] = r.look_through_applied;
  j["resolution_depth_exceeded"] = r.resolution_depth_exceeded;
  j["source"] = std::string(to_string(r.source));
  j["confidence"] = optional_to_json(r.confidence);
  j["resolved_work"] = r.resolved_work ? Json(*r.resolved_work) : Json(nullptr);
  return j;
}

inline CitationLabel label_from_json(const Json& j) {
  try {
    CitationLabel l;
    l.title = j.at("title").get<std::string>();
    l.platform = parse_platform(j.at("platform").get<std::string>());
    l.citation_index = j.at("citation_index").get<std::size_t>();
    if (j.at("status").get<std::string>() == "UNRESOLVABLE") {
      l.unresolved_reason = j.value("reason", std::string());
      return l;
    }
    ClassificationResult r;
    r.citation_index = l.citation_index;
    r.category = parse_category(j.at("category").get<std::string>());
    r.rule_path = j.at("rule_path").get<std::vector<std::string>>();
    r.look_through_applied = j.at("look_through_applied").get<bool>();
    r.resolution_depth_exceeded = j.value("resolution_depth_exceeded", false);
    r.source = parse_label_source(j.at("source").get<std::string>());
    r.confidence = optional_from_json(j.at("confidence"));
    if (!j.at("resolved_work").is_null()) r.resolved_work = j.at("resolved_work").get<std::string>();
    l.result = std::move(r);
    return l;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad classification line: ") + e.what());
  }
}

inline std::string labels_to_jsonl(const std::vector<CitationLabel>& labels) {
  std::string out;
  for (const auto& l : labels) out += to_json(l).dump() + "\n";
  return out;
}

inline std::vector<CitationLabel> labels_from_jsonl(std::string_view text) {
  std::vector<CitationLabel> out;
  for (const auto& line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    try {
      out.push_back(label_from_json(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParse, std::string("classifications: ") + e.what());
    }
  }
  return out;
}

}  // namespace epiaudit
