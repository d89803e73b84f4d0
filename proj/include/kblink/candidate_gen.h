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

#ifndef KBLINK_CANDIDATE_GEN_H_
#define KBLINK_CANDIDATE_GEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kblink/kb_store.h"
#include "kblink/segmenter.h"

namespace kblink {

enum class RetrievalChannel { kExact, kFuzzy };

struct CandidateRef {
  Mention mention;
  std::string entity_id;
  int retrieval_rank = 1;  // 1-based, never exceeds max_hits
  RetrievalChannel channel = RetrievalChannel::kExact;
};

struct RetrievalParams {
  int max_hits = 10;
  double fuzzy_threshold = 0.5;
};

// Jaccard similarity of the character-bigram sets of `a` and `b`. A
// single-character string contributes the degenerate set {character};
// two empty strings score 0.
double bigram_jaccard(std::string_view a, std::string_view b);

// Inverted bigram index over the dictionary surfaces, for fuzzy retrieval.
// Build once per dictionary; only valid for the dictionary it was built from.
class CandidateIndex {
 public:
  CandidateIndex() = default;
  explicit CandidateIndex(const AliasDictionary& dict);

  // Surfaces sharing at least one bigram with `surface`, scored by bigram
  // Jaccard and sorted by (similarity desc, length asc, surface asc).
  std::vector<std::pair<double, const std::string*>> fuzzy_matches(
      std::string_view surface) const;

 private:
  std::vector<std::string> surfaces_;            // sorted unique
  std::vector<std::size_t> surface_chars_;       // length in scalar values
  std::vector<std::vector<std::u32string>> gram_sets_;  // sorted unique grams
  std::unordered_map<std::u32string, std::vector<std::uint32_t>> postings_;
};

// Candidates for one mention: exact alias hits first (ranked by ascending
// entity id), then fuzzy hits by descending bigram Jaccard until `max_hits`
// total or similarity falls below `fuzzy_threshold`. Fuzzy ids already seen
// on the exact channel are skipped.
std::vector<CandidateRef> candidates_for(const Mention& mention,
                                         const AliasDictionary& dict,
                                         const CandidateIndex& index,
                                         const RetrievalParams& params = {});

// Candidates for every mention of `query`, deduplicated by
// (mention span, entity id) keeping the lowest retrieval rank.
std::vector<CandidateRef> gather(std::string_view query,
                                 const AliasDictionary& dict,
                                 const CandidateIndex& index,
                                 const RetrievalParams& params = {});

// As above for a pre-segmented query.
std::vector<CandidateRef> gather(const std::vector<Mention>& mentions,
                                 const AliasDictionary& dict,
                                 const CandidateIndex& index,
                                 const RetrievalParams& params = {});

}  // namespace kblink

#endif  // KBLINK_CANDIDATE_GEN_H_
