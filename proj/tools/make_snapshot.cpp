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

// Writes a seeded synthetic corpus into a document cache, so the full
// pipeline can run offline:
//
//   make-snapshot --topics data/topics_top72.tsv --cache snap/cache --seed 20251102
//   audit run --offline --classifier rules --topics data/topics_top72.tsv --cache snap/cache

#include <iostream>

#include <CLI11.hpp>

#include "epiaudit/epiaudit.hpp"
#include "epiaudit/synth/snapshot.hpp"

int main(int argc, char** argv) {
  std::string topics, cache = "cache";
  std::uint64_t seed = 20251102;
  CLI::App app{"Write a seeded synthetic snapshot into a document cache"};
  app.add_option("--topics", topics, "topic list")->required();
  app.add_option("--cache", cache, "cache directory")->capture_default_str();
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto entries = epiaudit::load_topics(topics);
    const auto s = epiaudit::synth::write_snapshot(entries, cache, seed);
    std::cout << s.documents << " documents, " << s.citations << " citations written to " << cache << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make-snapshot: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
