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

#ifndef KBLINK_FEATURE_EXTRACTOR_H_
#define KBLINK_FEATURE_EXTRACTOR_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kblink/candidate_gen.h"
#include "kblink/embedding_store.h"
#include "kblink/kb_store.h"
#include "kblink/segmenter.h"

namespace kblink {

inline constexpr std::size_t kFeatureCount = 9;

// Per mention-candidate pair:
//   [0] character-bag similarity of query and candidate description, in [0,1]
//   [1] mention is all ASCII digits                       (0/1)
//   [2] mention contains an ASCII digit                   (0/1)
//   [3] mention is all ASCII letters                      (0/1)
//   [4] mention contains an ASCII letter                  (0/1)
//   [5] candidate entity name is a substring of the query (0/1)
//   [6] query is a substring of the candidate entity name (0/1)
//   [7] best embedding similarity between description words and the other
//       mentions of the query, in [-1,1]; -1 when nothing is comparable
//   [8] some other mention occurs in the candidate description (0/1)
using FeatureVector = std::array<double, kFeatureCount>;

// Dice coefficient over character bags: 2*c/(l1+l2) where c is the size of
// the multiset intersection. 0.0 when both strings are empty.
double similarity1(std::string_view a, std::string_view b);

// All description objects joined by U+001F. The separator keeps substring
// probes from matching across object boundaries and is never counted as a
// character.
std::string description_text(const Entity& entity);

// Sorted unique word tokens of the entity's description objects: runs of
// non-space non-punctuation characters, plus each object's dictionary
// segmentation when `dict` is given.
std::vector<std::string> description_words(const Entity& entity,
                                           const AliasDictionary* dict);

// Maximum similarity2 between any embeddable description word and any
// embeddable mention other than mentions[mention_index]. Unembeddable words
// and mentions contribute -1, as does an empty pairing.
double feature8(std::size_t mention_index, const std::vector<Mention>& mentions,
                const std::vector<std::string>& object_words,
                const EmbeddingTable& table,
                SimilarityMode mode = SimilarityMode::kCosine);

// Full feature vector for one candidate of `query`. `mentions` must be the
// query's complete mention set; `entity` must match candidate.entity_id.
FeatureVector extract(std::string_view query,
                      const std::vector<Mention>& mentions,
                      const CandidateRef& candidate, const Entity& entity,
                      const EmbeddingTable& table,
                      const AliasDictionary* dict = nullptr,
                      SimilarityMode mode = SimilarityMode::kCosine);

}  // namespace kblink

#endif  // KBLINK_FEATURE_EXTRACTOR_H_
