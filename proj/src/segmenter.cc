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

#include "kblink/segmenter.h"

#include <algorithm>
#include <set>

#include "kblink/error.h"
#include "kblink/unicode.h"

namespace kblink {

namespace {

bool all_ascii_alnum(std::u32string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_ascii_alnum);
}

Mention make_mention(const std::u32string& text, std::size_t start,
                     std::size_t end) {
  return Mention{
      encode_utf8(std::u32string_view(text).substr(start, end - start)), start,
      end};
}

}  // namespace

std::vector<Mention> fmm_tokens(std::string_view text,
                                const AliasDictionary& dict) {
  const std::u32string u = decode_utf8(text);
  const std::size_t n = u.size();
  const std::size_t max_len = std::max<std::size_t>(1, dict.max_surface_chars());

  std::vector<Mention> out;
  std::size_t i = 0;
  while (i < n) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(max_len, n - i); len >= 1; --len) {
      if (dict.contains(
              encode_utf8(std::u32string_view(u).substr(i, len)))) {
        matched = len;
        break;
      }
    }
    if (matched > 0) {
      out.push_back(make_mention(u, i, i + matched));
      i += matched;
      continue;
    }
    if (is_ascii_alnum(u[i])) {
      std::size_t j = i + 1;
      while (j < n && is_ascii_alnum(u[j])) ++j;
      out.push_back(make_mention(u, i, j));
      i = j;
      continue;
    }
    out.push_back(make_mention(u, i, i + 1));
    ++i;
  }
  return out;
}

std::vector<Mention> segment(std::string_view query,
                             const AliasDictionary& dict) {
  if (is_blank(query)) {
    throw Error(ErrorKind::kEmptyQuery, "query is empty after trimming");
  }
  const std::u32string u = decode_utf8(query);
  const std::size_t n = u.size();

  std::vector<Mention> mentions;
  std::set<std::pair<std::size_t, std::size_t>> spans;
  auto add = [&](Mention m) {
    if (spans.emplace(m.start, m.end).second) mentions.push_back(std::move(m));
  };

  // FMM tokens, keeping only surfaces that can name an entity.
  for (Mention& token : fmm_tokens(query, dict)) {
    const std::u32string_view slice =
        std::u32string_view(u).substr(token.start, token.end - token.start);
    if (dict.contains(token.surface) ||
        (slice.size() == 1 && is_cjk(slice[0])) || all_ascii_alnum(slice)) {
      add(std::move(token));
    }
  }

  // Every dictionary surface occurring as a substring.
  const std::size_t max_len = dict.max_surface_chars();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t len = 1; len <= std::min(max_len, n - i); ++len) {
      if (dict.contains(encode_utf8(std::u32string_view(u).substr(i, len)))) {
        add(make_mention(u, i, i + len));
      }
    }
  }

  std::sort(mentions.begin(), mentions.end(),
            [](const Mention& a, const Mention& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.end > b.end;  // longer mentions first
            });
  return mentions;
}

}  // namespace kblink
