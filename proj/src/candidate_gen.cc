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

#include "kblink/candidate_gen.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "kblink/unicode.h"

namespace kblink {

namespace {

// Sorted unique code-point bigrams; a one-character string yields itself.
std::vector<std::u32string> gram_set(std::u32string_view s) {
  std::vector<std::u32string> grams;
  if (s.size() >= 2) {
    grams.reserve(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      grams.emplace_back(s.substr(i, 2));
    }
  } else if (s.size() == 1) {
    grams.emplace_back(s);
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard(const std::vector<std::u32string>& a,
               const std::vector<std::u32string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace

double bigram_jaccard(std::string_view a, std::string_view b) {
  return jaccard(gram_set(decode_utf8(a)), gram_set(decode_utf8(b)));
}

CandidateIndex::CandidateIndex(const AliasDictionary& dict) {
  std::set<std::string> unique;
  for (const AliasEntry& entry : dict.entries()) unique.insert(entry.surface);
  surfaces_.assign(unique.begin(), unique.end());
  surface_chars_.reserve(surfaces_.size());
  gram_sets_.reserve(surfaces_.size());
  for (std::uint32_t idx = 0; idx < surfaces_.size(); ++idx) {
    std::u32string u32 = decode_utf8(surfaces_[idx]);
    surface_chars_.push_back(u32.size());
    gram_sets_.push_back(gram_set(u32));
    for (const std::u32string& gram : gram_sets_.back()) {
      postings_[gram].push_back(idx);
    }
  }
}

std::vector<std::pair<double, const std::string*>>
CandidateIndex::fuzzy_matches(std::string_view surface) const {
  std::vector<std::u32string> query_grams = gram_set(decode_utf8(surface));
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::pair<double, const std::string*>> hits;
  for (const std::u32string& gram : query_grams) {
    auto it = postings_.find(gram);
    if (it == postings_.end()) continue;
    for (std::uint32_t idx : it->second) {
      if (!seen.insert(idx).second) continue;
      double sim = jaccard(query_grams, gram_sets_[idx]);
      if (sim > 0.0) hits.emplace_back(sim, &surfaces_[idx]);
    }
  }
  std::sort(hits.begin(), hits.end(),
            [this](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              std::size_t la = surface_chars_[a.second - surfaces_.data()];
              std::size_t lb = surface_chars_[b.second - surfaces_.data()];
              if (la != lb) return la < lb;
              return *a.second < *b.second;
            });
  return hits;
}

std::vector<CandidateRef> candidates_for(const Mention& mention,
                                         const AliasDictionary& dict,
                                         const CandidateIndex& index,
                                         const RetrievalParams& params) {
  std::vector<CandidateRef> out;
  if (params.max_hits <= 0) return out;
  std::unordered_set<std::string> taken;
  int rank = 1;

  for (const std::string& id : dict.lookup(mention.surface)) {
    if (static_cast<int>(out.size()) >= params.max_hits) break;
    out.push_back({mention, id, rank++, RetrievalChannel::kExact});
    taken.insert(id);
  }
  if (static_cast<int>(out.size()) >= params.max_hits) return out;

  for (const auto& [sim, surface] : index.fuzzy_matches(mention.surface)) {
    if (sim < params.fuzzy_threshold) break;
    if (*surface == mention.surface) continue;  // already the exact channel
    for (const std::string& id : dict.lookup(*surface)) {
      if (static_cast<int>(out.size()) >= params.max_hits) return out;
      if (!taken.insert(id).second) continue;
      out.push_back({mention, id, rank++, RetrievalChannel::kFuzzy});
    }
    if (static_cast<int>(out.size()) >= params.max_hits) break;
  }
  return out;
}

std::vector<CandidateRef> gather(const std::vector<Mention>& mentions,
                                 const AliasDictionary& dict,
                                 const CandidateIndex& index,
                                 const RetrievalParams& params) {
  std::vector<CandidateRef> out;
  // (start, end, id) -> position in `out`; first occurrence keeps the
  // lowest rank because mentions repeat in segmentation order.
  std::set<std::tuple<std::size_t, std::size_t, std::string>> seen;
  for (const Mention& mention : mentions) {
    for (CandidateRef& ref : candidates_for(mention, dict, index, params)) {
      auto key = std::make_tuple(ref.mention.start, ref.mention.end,
                                 ref.entity_id);
      if (!seen.insert(key).second) continue;
      out.push_back(std::move(ref));
    }
  }
  return out;
}

std::vector<CandidateRef> gather(std::string_view query,
                                 const AliasDictionary& dict,
                                 const CandidateIndex& index,
                                 const RetrievalParams& params) {
  return gather(segment(query, dict), dict, index, params);
}

}  // namespace kblink
