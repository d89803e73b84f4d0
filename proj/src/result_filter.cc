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

#include "kblink/result_filter.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "kblink/feature_extractor.h"
#include "kblink/unicode.h"

namespace kblink {

std::vector<ScoredCandidate> statistical_filter(
    std::vector<ScoredCandidate> per_mention, const FilterParams& params) {
  std::sort(per_mention.begin(), per_mention.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.candidate.entity_id < b.candidate.entity_id;
            });
  if (static_cast<int>(per_mention.size()) > params.k) {
    per_mention.resize(static_cast<std::size_t>(params.k));
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < per_mention.size(); ++i) {
    cumulative += per_mention[i].score;
    if (cumulative >= params.alpha) {
      per_mention.resize(i + 1);
      return per_mention;
    }
  }
  return {};  // even the full top-k stays below alpha
}

namespace {

using Span = std::pair<std::size_t, std::size_t>;

std::string entity_description(const KnowledgeBase& kb,
                               const std::string& entity_id) {
  const Entity* entity = kb.find(entity_id);
  std::string text;
  if (entity != nullptr) {
    for (const auto& [predicate, object] : entity->description) {
      text += object;
    }
  }
  return text;
}

// Rule 1: inside every maximal ASCII-letter run of the query, two or more
// candidate-bearing mention spans covering strictly less than the run mean
// the run was carved up; all such fragments are spurious.
void drop_letter_run_fragments(std::string_view query,
                               std::vector<ScoredCandidate>& kept) {
  std::u32string u = decode_utf8(query);
  std::set<Span> doomed;
  std::size_t i = 0;
  while (i < u.size()) {
    if (!is_ascii_alpha(u[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < u.size() && is_ascii_alpha(u[j])) ++j;
    std::set<Span> inside;
    for (const ScoredCandidate& sc : kept) {
      const Mention& m = sc.candidate.mention;
      if (m.start >= i && m.end <= j && m.end - m.start < j - i) {
        inside.insert({m.start, m.end});
      }
    }
    if (inside.size() >= 2) doomed.insert(inside.begin(), inside.end());
    i = j;
  }
  if (doomed.empty()) return;
  std::erase_if(kept, [&doomed](const ScoredCandidate& sc) {
    return doomed.count({sc.candidate.mention.start,
                         sc.candidate.mention.end}) != 0;
  });
}

// Rule 2: a lone CJK character is too ambiguous to link.
void drop_single_cjk(std::vector<ScoredCandidate>& kept) {
  std::erase_if(kept, [](const ScoredCandidate& sc) {
    std::u32string u = decode_utf8(sc.candidate.mention.surface);
    return u.size() == 1 && is_cjk(u[0]);
  });
}

// Rule 3: one mention per entity — the one whose surface best matches the
// entity's description wins; ties go to the longer, then earlier, span.
void keep_best_mention_per_entity(std::vector<ScoredCandidate>& kept,
                                  const KnowledgeBase& kb) {
  std::map<std::string, std::set<Span>> spans_by_entity;
  for (const ScoredCandidate& sc : kept) {
    spans_by_entity[sc.candidate.entity_id].insert(
        {sc.candidate.mention.start, sc.candidate.mention.end});
  }
  std::map<std::string, Span> winner;
  for (const auto& [entity_id, spans] : spans_by_entity) {
    if (spans.size() < 2) continue;
    std::string description = entity_description(kb, entity_id);
    bool have = false;
    Span best{};
    double best_sim = 0.0;
    for (const ScoredCandidate& sc : kept) {
      if (sc.candidate.entity_id != entity_id) continue;
      const Mention& m = sc.candidate.mention;
      Span span{m.start, m.end};
      double sim = similarity1(m.surface, description);
      std::size_t len = m.end - m.start;
      std::size_t best_len = best.second - best.first;
      bool better = !have || sim > best_sim ||
                    (sim == best_sim &&
                     (len > best_len ||
                      (len == best_len && span.first < best.first)));
      if (better) {
        have = true;
        best = span;
        best_sim = sim;
      }
    }
    winner[entity_id] = best;
  }
  if (winner.empty()) return;
  std::erase_if(kept, [&winner](const ScoredCandidate& sc) {
    auto it = winner.find(sc.candidate.entity_id);
    if (it == winner.end()) return false;
    return Span{sc.candidate.mention.start, sc.candidate.mention.end} !=
           it->second;
  });
}

// Rule 4: an exact name match outranks every sibling candidate.
void keep_exact_name_match(std::vector<ScoredCandidate>& kept,
                           const KnowledgeBase& kb) {
  std::map<Span, std::vector<const ScoredCandidate*>> by_span;
  for (const ScoredCandidate& sc : kept) {
    by_span[{sc.candidate.mention.start, sc.candidate.mention.end}].push_back(
        &sc);
  }
  std::map<Span, std::string> chosen;
  for (const auto& [span, group] : by_span) {
    if (group.size() < 2) continue;
    const ScoredCandidate* exact = nullptr;
    for (const ScoredCandidate* sc : group) {
      const Entity* entity = kb.find(sc->candidate.entity_id);
      if (entity == nullptr || entity->name != sc->candidate.mention.surface) {
        continue;
      }
      bool better = exact == nullptr || sc->score > exact->score ||
                    (sc->score == exact->score &&
                     sc->candidate.entity_id < exact->candidate.entity_id);
      if (better) exact = sc;
    }
    if (exact != nullptr) chosen[span] = exact->candidate.entity_id;
  }
  if (chosen.empty()) return;
  std::erase_if(kept, [&chosen](const ScoredCandidate& sc) {
    auto it = chosen.find({sc.candidate.mention.start,
                           sc.candidate.mention.end});
    if (it == chosen.end()) return false;
    return sc.candidate.entity_id != it->second;
  });
}

}  // namespace

std::vector<ScoredCandidate> rule_filter(std::string_view query,
                                         std::vector<ScoredCandidate> kept,
                                         const KnowledgeBase& kb) {
  drop_letter_run_fragments(query, kept);
  drop_single_cjk(kept);
  keep_best_mention_per_entity(kept, kb);
  keep_exact_name_match(kept, kb);
  std::sort(kept.begin(), kept.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              return std::tie(a.candidate.mention.start,
                              a.candidate.entity_id, a.candidate.mention.end) <
                     std::tie(b.candidate.mention.start,
                              b.candidate.entity_id, b.candidate.mention.end);
            });
  return kept;
}

}  // namespace kblink
