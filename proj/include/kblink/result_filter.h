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

#ifndef KBLINK_RESULT_FILTER_H_
#define KBLINK_RESULT_FILTER_H_

#include <string_view>
#include <vector>

#include "kblink/candidate_gen.h"
#include "kblink/kb_store.h"

namespace kblink {

struct ScoredCandidate {
  CandidateRef candidate;
  double score = 0.0;  // finite, in [0,1]
};

struct FilterParams {
  double alpha = 0.3;
  int k = 3;
};

// Cumulative-threshold cut for the candidates of ONE mention: sort by score
// descending (ties by ascending entity id), truncate to the top k, then keep
// the shortest prefix whose scores sum to at least alpha. When even the full
// top-k sum falls short, everything is dropped. alpha = 0 keeps exactly the
// top candidate: accumulation starts with one term.
std::vector<ScoredCandidate> statistical_filter(
    std::vector<ScoredCandidate> per_mention, const FilterParams& params = {});

// Hand-rule cleanup over a whole query's surviving candidates, applied in
// this order:
//   1. Mentions that carve up a longer ASCII-letter run of the query - at
//      least two candidate-bearing spans strictly inside one run - lose all
//      their candidates.
//   2. Single-CJK-character mentions lose all their candidates.
//   3. An entity claimed by several mentions keeps only the mention whose
//      surface is most similar (by character-bag similarity) to the entity's
//      description; ties prefer the longer then the earlier mention.
//   4. A mention with several candidates where some candidate's name equals
//      the mention exactly keeps only that candidate (best-scoring such
//      candidate when names collide).
// Output is sorted by (mention start, entity id). Idempotent.
std::vector<ScoredCandidate> rule_filter(std::string_view query,
                                         std::vector<ScoredCandidate> kept,
                                         const KnowledgeBase& kb);

}  // namespace kblink

#endif  // KBLINK_RESULT_FILTER_H_
