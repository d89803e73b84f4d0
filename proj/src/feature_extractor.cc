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

#include "kblink/feature_extractor.h"

#include <algorithm>
#include <map>
#include <set>

#include "kblink/unicode.h"

namespace kblink {

namespace {

constexpr char32_t kSeparator = 0x001F;

bool all_of_chars(std::string_view s, bool (*pred)(char32_t)) {
  std::u32string u = decode_utf8(s);
  if (u.empty()) return false;
  return std::all_of(u.begin(), u.end(), pred);
}

bool any_of_chars(std::string_view s, bool (*pred)(char32_t)) {
  std::u32string u = decode_utf8(s);
  return std::any_of(u.begin(), u.end(), pred);
}

bool contains(std::string_view haystack, std::string_view needle) {
  return !needle.empty() && haystack.find(needle) != std::string_view::npos;
}

void split_words(std::string_view text, std::set<std::string>& out) {
  std::u32string u = decode_utf8(text);
  std::size_t i = 0;
  while (i < u.size()) {
    if (is_space(u[i]) || is_punct(u[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < u.size() && !is_space(u[j]) && !is_punct(u[j])) ++j;
    out.insert(encode_utf8(std::u32string_view(u).substr(i, j - i)));
    i = j;
  }
}

}  // namespace

double similarity1(std::string_view a, std::string_view b) {
  std::u32string ua = decode_utf8(a);
  std::u32string ub = decode_utf8(b);
  if (ua.empty() && ub.empty()) return 0.0;
  std::map<char32_t, std::size_t> bag;
  for (char32_t c : ua) ++bag[c];
  std::size_t common = 0;
  for (char32_t c : ub) {
    auto it = bag.find(c);
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(ua.size() + ub.size());
}

std::string description_text(const Entity& entity) {
  std::string out;
  for (const auto& [predicate, object] : entity.description) {
    if (!out.empty()) out += encode_utf8(kSeparator);
    out += object;
  }
  return out;
}

std::vector<std::string> description_words(const Entity& entity,
                                           const AliasDictionary* dict) {
  std::set<std::string> words;
  for (const auto& [predicate, object] : entity.description) {
    split_words(object, words);
    if (dict == nullptr) continue;
    for (const Mention& token : fmm_tokens(object, *dict)) {
      std::u32string u = decode_utf8(token.surface);
      if (u.empty() || is_space(u[0]) || is_punct(u[0])) continue;
      words.insert(token.surface);
    }
  }
  return {words.begin(), words.end()};
}

double feature8(std::size_t mention_index, const std::vector<Mention>& mentions,
                const std::vector<std::string>& object_words,
                const EmbeddingTable& table, SimilarityMode mode) {
  std::vector<std::vector<double>> mention_vecs;
  bool have_other = false;
  for (std::size_t k = 0; k < mentions.size(); ++k) {
    if (k == mention_index) continue;
    have_other = true;
    if (auto v = table.vector_for(mentions[k].surface)) {
      mention_vecs.push_back(std::move(*v));
    }
  }
  if (!have_other || object_words.empty()) return -1.0;

  double best = -1.0;  // every unembeddable pairing scores the default
  for (const std::string& word : object_words) {
    auto w = table.vector_for(word);
    if (!w) continue;
    for (const std::vector<double>& m : mention_vecs) {
      best = std::max(best, similarity2(*w, m, mode));
    }
  }
  return best;
}

FeatureVector extract(std::string_view query,
                      const std::vector<Mention>& mentions,
                      const CandidateRef& candidate, const Entity& entity,
                      const EmbeddingTable& table, const AliasDictionary* dict,
                      SimilarityMode mode) {
  const std::string& surface = candidate.mention.surface;

  std::string desc_plain;
  for (const auto& [predicate, object] : entity.description) {
    desc_plain += object;
  }
  std::string desc_joined = description_text(entity);

  std::size_t index = mentions.size();  // "no self" when the span is unknown
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (mentions[i].start == candidate.mention.start &&
        mentions[i].end == candidate.mention.end) {
      index = i;
      break;
    }
  }

  FeatureVector f{};
  f[0] = similarity1(query, desc_plain);
  f[1] = all_of_chars(surface, is_ascii_digit) ? 1.0 : 0.0;
  f[2] = any_of_chars(surface, is_ascii_digit) ? 1.0 : 0.0;
  f[3] = all_of_chars(surface, is_ascii_alpha) ? 1.0 : 0.0;
  f[4] = any_of_chars(surface, is_ascii_alpha) ? 1.0 : 0.0;
  f[5] = contains(query, entity.name) ? 1.0 : 0.0;
  f[6] = contains(entity.name, query) ? 1.0 : 0.0;
  f[7] = std::clamp(
      feature8(index, mentions, description_words(entity, dict), table, mode),
      -1.0, 1.0);
  f[8] = 0.0;
  for (std::size_t k = 0; k < mentions.size(); ++k) {
    if (k == index) continue;
    if (contains(desc_joined, mentions[k].surface)) {
      f[8] = 1.0;
      break;
    }
  }
  return f;
}

}  // namespace kblink
