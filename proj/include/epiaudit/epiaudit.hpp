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

// Umbrella header: pulls in the whole toolkit.
#pragma once

#include "epiaudit/acquisition/cache.hpp"
#include "epiaudit/acquisition/fetcher.hpp"
#include "epiaudit/acquisition/http.hpp"
#include "epiaudit/acquisition/manifest.hpp"
#include "epiaudit/agreement/agreement.hpp"
#include "epiaudit/metrics/topic_metrics.hpp"
#include "epiaudit/networks/article_graph.hpp"
#include "epiaudit/networks/category_graph.hpp"
#include "epiaudit/parsing/parser.hpp"
#include "epiaudit/pipeline/agree.hpp"
#include "epiaudit/pipeline/report.hpp"
#include "epiaudit/profiles/profiles.hpp"
#include "epiaudit/scaling/scaling.hpp"
#include "epiaudit/stats/special.hpp"
#include "epiaudit/taxonomy/classifier.hpp"
