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

#include "kblink/kb_store.h"

#include <algorithm>
#include <ostream>
#include <set>
#include <unordered_set>

#include "kblink/error.h"
#include "kblink/unicode.h"
#include "text_io.h"

namespace kblink {

namespace {

constexpr std::string_view kNamePredicate = "name";
constexpr char32_t kMiddleDot = 0x00B7;

bool is_open_bracket(char32_t cp) { return cp == U'(' || cp == 0xFF08; }
bool is_close_bracket(char32_t cp) { return cp == U')' || cp == 0xFF09; }
bool is_bracket(char32_t cp) {
  return is_open_bracket(cp) || is_close_bracket(cp);
}

bool contains_bracket(std::u32string_view s) {
  return std::any_of(s.begin(), s.end(), is_bracket);
}

}  // namespace

const Entity* KnowledgeBase::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return nullptr;
  return &entities_[it->second];
}

Entity& KnowledgeBase::obtain(std::string_view id) {
  auto [it, inserted] = by_id_.emplace(std::string(id), entities_.size());
  if (inserted) {
    entities_.emplace_back();
    entities_.back().id = std::string(id);
  }
  return entities_[it->second];
}

KnowledgeBase parse_kb(std::istream& in, const std::string& source) {
  KnowledgeBase kb;
  internal::for_each_data_line(in, [&](std::string_view line,
                                       std::size_t line_no) {
    auto fields = internal::split_tabs(line);
    if (fields.size() < 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::kMalformedLine,
                  source + ": malformed triple at line " +
                      std::to_string(line_no),
                  line_no);
    }
    const std::string_view subject = fields[0];
    const std::string_view predicate = fields[1];
    // The object is everything after the second tab, tabs included.
    const std::string_view object =
        line.substr(fields[0].size() + fields[1].size() + 2);
    Entity& entity = kb.obtain(subject);
    if (predicate == kNamePredicate && entity.name.empty()) {
      if (object.empty()) {
        throw Error(ErrorKind::kMalformedLine,
                    source + ": empty entity name at line " +
                        std::to_string(line_no),
                    line_no);
      }
      entity.name = std::string(object);
    } else {
      entity.description.emplace_back(std::string(predicate),
                                      std::string(object));
    }
  });
  for (const Entity& entity : kb.entities()) {
    if (entity.name.empty()) {
      throw Error(ErrorKind::kMissingName,
                  source + ": subject has no name triple: " + entity.id);
    }
  }
  return kb;
}

KnowledgeBase load_kb(const std::string& path) {
  auto in = internal::open_input(path);
  return parse_kb(in, path);
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kEnglishNormalized: return "english_normalized";
    case Provenance::kBracketStripped: return "bracket_stripped";
    case Provenance::kPlaceBase: return "place_base";
    case Provenance::kNickname: return "nickname";
  }
  return "unknown";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  for (Provenance p : {Provenance::kOriginal, Provenance::kEnglishNormalized,
                       Provenance::kBracketStripped, Provenance::kPlaceBase,
                       Provenance::kNickname}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

std::string place_suffix(PlaceKind kind) {
  switch (kind) {
    case PlaceKind::kProvince: return "省";
    case PlaceKind::kCity: return "市";
    case PlaceKind::kCounty: return "县";
    case PlaceKind::kDistrict: return "区";
    case PlaceKind::kTown: return "镇";
    case PlaceKind::kVillage: return "村";
    case PlaceKind::kOther: return "乡";
  }
  return "";
}

std::optional<std::string> normalize_english_name(std::string_view name) {
  std::u32string u = decode_utf8(name);
  bool has_letter = false;
  bool has_underscore = false;
  for (char32_t cp : u) {
    has_letter |= is_ascii_alpha(cp);
    has_underscore |= cp == U'_';
  }
  if (!has_letter || !has_underscore) return std::nullopt;

  std::u32string out;
  out.reserve(u.size());
  for (char32_t cp : u) {
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    if (cp == U'_') cp = U' ';
    if (cp == U' ' && !out.empty() && out.back() == U' ') continue;
    out.push_back(cp);
  }
  while (!out.empty() && out.front() == U' ') out.erase(out.begin());
  while (!out.empty() && out.back() == U' ') out.pop_back();
  if (out.empty()) return std::nullopt;
  return encode_utf8(out);
}

std::vector<std::string> strip_brackets(std::string_view name) {
  const std::u32string u = decode_utf8(name);
  std::vector<std::u32string> raw;
  if (!u.empty() && is_close_bracket(u.back())) {
    // Trailing parenthesized qualifier: X_(Y) or X(Y).
    std::size_t open = std::u32string::npos;
    for (std::size_t i = u.size() - 1; i-- > 0;) {
      if (is_open_bracket(u[i])) {
        open = i;
        break;
      }
    }
    if (open != std::u32string::npos && open > 0) {
      std::u32string prefix = u.substr(0, open);
      if (!prefix.empty() && prefix.back() == U'_') prefix.pop_back();
      std::u32string inner = u.substr(open + 1, u.size() - open - 2);
      if (!prefix.empty()) {
        raw.push_back(prefix);
        raw.push_back(prefix + inner);
      }
    }
  } else if (u.find(kMiddleDot) != std::u32string::npos) {
    // Companion rule: keep the segment after the last middle dot.
    raw.push_back(u.substr(u.rfind(kMiddleDot) + 1));
  }

  std::vector<std::string> out;
  for (const std::u32string& s : raw) {
    if (s.empty() || contains_bracket(s)) continue;
    std::string enc = encode_utf8(s);
    if (std::find(out.begin(), out.end(), enc) == out.end()) {
      out.push_back(std::move(enc));
    }
  }
  return out;
}

std::optional<PlaceEntry> place_entry_for(std::string_view name) {
  static const std::pair<char32_t, PlaceKind> kSuffixes[] = {
      {U'省', PlaceKind::kProvince}, {U'市', PlaceKind::kCity},
      {U'县', PlaceKind::kCounty},   {U'区', PlaceKind::kDistrict},
      {U'镇', PlaceKind::kTown},     {U'乡', PlaceKind::kOther},
      {U'村', PlaceKind::kVillage},
  };
  std::u32string u = decode_utf8(name);
  if (u.size() < 2) return std::nullopt;  // a bare suffix has no base
  for (const auto& [suffix, kind] : kSuffixes) {
    if (u.back() == suffix) {
      PlaceEntry entry;
      entry.base = encode_utf8(std::u32string_view(u).substr(0, u.size() - 1));
      entry.full = std::string(name);
      entry.kind = kind;
      return entry;
    }
  }
  return std::nullopt;
}

std::vector<PlaceEntry> place_directory(const KnowledgeBase& kb) {
  std::vector<PlaceEntry> out;
  for (const Entity& entity : kb.entities()) {
    if (auto entry = place_entry_for(entity.name)) {
      out.push_back(std::move(*entry));
    }
  }
  return out;
}

std::vector<std::string> extract_nicknames(const Entity& entity) {
  static const std::u32string kMarkers[] = {U"别称", U"别名"};
  static const std::u32string kSkip = U"：:为";
  static const std::u32string kStop = U"，。；、,;";

  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& [predicate, object] : entity.description) {
    (void)predicate;
    const std::u32string u = decode_utf8(object);
    for (std::size_t pos = 0; pos < u.size(); ++pos) {
      for (const std::u32string& marker : kMarkers) {
        if (u.compare(pos, marker.size(), marker) != 0) continue;
        std::size_t i = pos + marker.size();
        if (i < u.size() && kSkip.find(u[i]) != std::u32string::npos) ++i;
        std::size_t j = i;
        while (j < u.size() && kStop.find(u[j]) == std::u32string::npos) ++j;
        if (j > i) {
          std::string capture = encode_utf8(std::u32string_view(u).substr(i, j - i));
          if (seen.insert(capture).second) out.push_back(std::move(capture));
        }
      }
    }
  }
  return out;
}

void AliasDictionary::insert(std::string_view surface,
                             std::string_view entity_id,
                             Provenance provenance) {
  std::string key = trim(surface);
  if (key.empty()) return;
  auto& ids = map_[key];
  std::pair<std::string, Provenance> value(std::string(entity_id), provenance);
  auto it = std::lower_bound(ids.begin(), ids.end(), value);
  if (it != ids.end() && *it == value) return;
  ids.insert(it, std::move(value));
  max_surface_chars_ = std::max(max_surface_chars_, count_chars(key));
}

bool AliasDictionary::contains(std::string_view surface) const {
  return map_.find(std::string(surface)) != map_.end();
}

std::vector<std::string> AliasDictionary::lookup(
    std::string_view surface) const {
  std::vector<std::string> out;
  auto it = map_.find(std::string(surface));
  if (it == map_.end()) return out;
  for (const auto& [id, provenance] : it->second) {
    (void)provenance;
    if (out.empty() || out.back() != id) out.push_back(id);
  }
  return out;
}

std::vector<AliasEntry> AliasDictionary::entries() const {
  std::vector<AliasEntry> out;
  for (const auto& [surface, ids] : map_) {
    for (const auto& [id, provenance] : ids) {
      out.push_back({surface, id, provenance});
    }
  }
  std::sort(out.begin(), out.end(), [](const AliasEntry& a, const AliasEntry& b) {
    if (a.surface != b.surface) return a.surface < b.surface;
    if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
    return a.provenance < b.provenance;
  });
  return out;
}

AliasDictionary build_alias_dictionary(const KnowledgeBase& kb) {
  AliasDictionary dict;
  for (const Entity& entity : kb.entities()) {
    dict.insert(entity.name, entity.id, Provenance::kOriginal);
    if (auto normalized = normalize_english_name(entity.name)) {
      dict.insert(*normalized, entity.id, Provenance::kEnglishNormalized);
    }
    for (const std::string& alias : strip_brackets(entity.name)) {
      dict.insert(alias, entity.id, Provenance::kBracketStripped);
    }
    if (auto place = place_entry_for(entity.name)) {
      dict.insert(place->base, entity.id, Provenance::kPlaceBase);
    }
    for (const std::string& nickname : extract_nicknames(entity)) {
      dict.insert(nickname, entity.id, Provenance::kNickname);
    }
  }
  return dict;
}

void dump_aliases(const AliasDictionary& dict, std::ostream& out) {
  for (const AliasEntry& entry : dict.entries()) {
    out << entry.surface << '\t' << entry.entity_id << '\t'
        << to_string(entry.provenance) << '\n';
  }
}

AliasDictionary load_alias_dump(std::istream& in) {
  AliasDictionary dict;
  internal::for_each_data_line(in, [&](std::string_view line,
                                       std::size_t line_no) {
    auto fields = internal::split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::kMalformedLine,
                  "alias dump: malformed line " + std::to_string(line_no),
                  line_no);
    }
    auto provenance = provenance_from_string(fields[2]);
    if (!provenance) {
      throw Error(ErrorKind::kMalformedLine,
                  "alias dump: unknown provenance at line " +
                      std::to_string(line_no),
                  line_no);
    }
    dict.insert(fields[0], fields[1], *provenance);
  });
  return dict;
}

}  // namespace kblink
