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

// Library use without the pipeline: two citation tallies for the same
// topic, their profiles and how far apart they are.

#include <cstdio>

#include "epiaudit/epiaudit.hpp"

int main() {
  using namespace epiaudit;
  // Counts in canonical order: academic, government, NGO, news, opinion,
  // corporate, reference, UGC.
  const EpistemicProfile human = profile_from_counts({120, 30, 10, 140, 12, 20, 25, 3});
  const EpistemicProfile machine = profile_from_counts({25, 60, 55, 110, 20, 35, 30, 18});

  std::printf("%-20s %8s %8s\n", "category", "human", "machine");
  for (EpistemicCategory c : kAllCategories) {
    std::printf("%-20s %7.2f%% %7.2f%%\n", std::string(to_string(c)).c_str(), 100.0 * human.proportions[index_of(c)],
                100.0 * machine.proportions[index_of(c)]);
  }
  std::printf("entropy (bits)       %8.3f %8.3f\n", stats::shannon_entropy(human.proportions),
              stats::shannon_entropy(machine.proportions));
  std::printf("Jensen-Shannon divergence %.4f, cosine similarity %.4f\n",
              stats::jensen_shannon_divergence(human.proportions, machine.proportions),
              stats::cosine_similarity(human.proportions, machine.proportions));
  return 0;
}
