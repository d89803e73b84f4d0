// Copyright 2026 The kblink Authors
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

#ifndef KBLINK_EVAL_H_
#define KBLINK_EVAL_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kblink/link_annotation.h"

namespace kblink {

struct PerQueryScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double link_f1 = 0.0;     // harmonic mean of the global P and R
  double average_f1 = 0.0;  // mean per-query F1 over gold-bearing queries
  std::map<std::string, PerQueryScore> per_query;
};

// Scores `predicted` against `gold`; a prediction is correct iff the same
// (query_id, mention, entity_id) triple is in gold. Predictions are treated
// as a set. Empty-side conventions: a side with nothing to score is perfect
// (1.0) against an empty counterpart and 0.0 otherwise. Throws DuplicateGold
// when gold repeats a triple.
MetricsReport evaluate(const std::vector<LinkAnnotation>& gold,
                       const std::vector<LinkAnnotation>& predicted);

// TSV `query_id <TAB> mention <TAB> entity_id`, one annotation per line.
// Blank lines and lines starting with '#' are skipped.
std::vector<LinkAnnotation> parse_annotations(std::istream& in,
                                              const std::string& source);
std::vector<LinkAnnotation> load_annotations(const std::string& path);

void write_metrics(const MetricsReport& report, std::ostream& out,
                   bool per_query = false);

}  // namespace kblink

#endif  // KBLINK_EVAL_H_
