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

#ifndef KBLINK_SEGMENTER_H_
#define KBLINK_SEGMENTER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kblink/kb_store.h"

namespace kblink {

// A candidate mention: a slice of the query. Offsets count Unicode scalar
// values, surface is the UTF-8 encoding of the slice [start, end).
struct Mention {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Mention&, const Mention&) = default;
};

// Forward-maximum-matching tiling of `text` over the dictionary: the longest
// dictionary surface starting at each position, else a maximal ASCII
// alphanumeric run, else a single character. Tokens are disjoint and cover
// every character, whitespace and punctuation included.
std::vector<Mention> fmm_tokens(std::string_view text,
                                const AliasDictionary& dict);

// Candidate mentions for a query: the FMM tokens that are dictionary
// surfaces, single CJK characters, or ASCII alphanumeric runs, unioned with
// every dictionary surface occurring anywhere as a substring. Deduplicated by
// span and sorted by start, then by descending length.
//
// Throws Error(kEmptyQuery) when the query is blank.
std::vector<Mention> segment(std::string_view query,
                             const AliasDictionary& dict);

}  // namespace kblink

#endif  // KBLINK_SEGMENTER_H_
