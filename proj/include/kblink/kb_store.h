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

#ifndef KBLINK_KB_STORE_H_
#define KBLINK_KB_STORE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kblink {

// A knowledge-base subject: an opaque id, a canonical name, and the
// predicate-object pairs that describe it.
struct Entity {
  std::string id;
  std::string name;
  std::vector<std::pair<std::string, std::string>> description;
};

class KnowledgeBase {
 public:
  // Returns the entity for `id`, or nullptr when unknown.
  const Entity* find(std::string_view id) const;

  // Entities in first-seen file order.
  const std::vector<Entity>& entities() const { return entities_; }

  std::size_t size() const { return entities_.size(); }

  // Appends a new entity or returns the existing one with the same id.
  Entity& obtain(std::string_view id);

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Loads a knowledge base from a UTF-8 TSV triple file. Each data line is
// `subject_id <TAB> predicate <TAB> object`; the object is everything after
// the second tab. Blank lines and lines starting with `#` are skipped. The
// object of the first `name` triple becomes the entity name; later `name`
// triples and all other predicates are appended to the description in file
// order.
//
// Throws Error(kMalformedLine) for lines with fewer than three fields or an
// empty subject, predicate, or name object, and Error(kMissingName) when a
// subject has no `name` triple.
KnowledgeBase load_kb(const std::string& path);
KnowledgeBase parse_kb(std::istream& in, const std::string& source);

// How a surface string entered the alias dictionary.
enum class Provenance {
  kOriginal = 0,
  kEnglishNormalized = 1,
  kBracketStripped = 2,
  kPlaceBase = 3,
  kNickname = 4,
};

const char* to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

struct AliasEntry {
  std::string surface;
  std::string entity_id;
  Provenance provenance = Provenance::kOriginal;

  friend bool operator==(const AliasEntry&, const AliasEntry&) = default;
};

enum class PlaceKind {
  kProvince,  // 省
  kCity,      // 市
  kCounty,    // 县
  kDistrict,  // 区
  kTown,      // 镇
  kVillage,   // 村
  kOther,     // 乡 (no dedicated kind)
};

struct PlaceEntry {
  std::string base;  // name with the administrative suffix removed
  std::string full;
  PlaceKind kind = PlaceKind::kOther;
};

// Canonical suffix character for a place kind, e.g. kCity -> "市".
std::string place_suffix(PlaceKind kind);

// Lowercases an English-style name and turns underscores into single spaces:
// "Microsoft_Word" -> "microsoft word". Returns nullopt unless the name
// contains at least one ASCII letter and at least one underscore.
std::optional<std::string> normalize_english_name(std::string_view name);

// For a name with a trailing parenthesized qualifier, `X_(Y)` or `X(Y)`
// (ASCII or fullwidth parentheses), returns {X, XY} with the connector
// underscore removed. Otherwise, for a name containing the middle dot U+00B7,
// returns the segment after the last dot. Outputs never contain parentheses.
std::vector<std::string> strip_brackets(std::string_view name);

// Splits `name` into (base, kind) when it ends in one of the administrative
// suffixes 省市县区镇乡村 and the base is non-empty.
std::optional<PlaceEntry> place_entry_for(std::string_view name);

// One PlaceEntry per entity whose name carries a recognized suffix.
std::vector<PlaceEntry> place_directory(const KnowledgeBase& kb);

// Scans the entity's description objects for the markers 别称 and 别名 and
// captures the run after each marker (skipping an optional ：, :, or 为) up
// to the first of ，。；、,; or end of object. Distinct non-empty captures in
// first-seen order.
std::vector<std::string> extract_nicknames(const Entity& entity);

// Multimap from surface string to entity ids, with provenance per entry.
// Immutable after construction; concurrent reads need no synchronization.
class AliasDictionary {
 public:
  // Trims the surface; empty surfaces and duplicate
  // (surface, entity_id, provenance) triples are ignored.
  void insert(std::string_view surface, std::string_view entity_id,
              Provenance provenance);

  bool contains(std::string_view surface) const;

  // Entity ids for an exact surface match, ascending and deduplicated.
  std::vector<std::string> lookup(std::string_view surface) const;

  // All entries sorted by (surface, entity_id, provenance).
  std::vector<AliasEntry> entries() const;

  // Longest surface length in Unicode scalar values (0 when empty).
  std::size_t max_surface_chars() const { return max_surface_chars_; }

  std::size_t surface_count() const { return map_.size(); }

 private:
  // Per surface: (entity_id, provenance) pairs kept sorted and unique.
  std::unordered_map<std::string, std::vector<std::pair<std::string, Provenance>>>
      map_;
  std::size_t max_surface_chars_ = 0;
};

// Union of the canonical names and the four expansion heuristics.
AliasDictionary build_alias_dictionary(const KnowledgeBase& kb);

// Debug dump `surface <TAB> entity_id <TAB> provenance`, sorted by
// (surface, entity_id, provenance), and its loader.
void dump_aliases(const AliasDictionary& dict, std::ostream& out);
AliasDictionary load_alias_dump(std::istream& in);

}  // namespace kblink

#endif  // KBLINK_KB_STORE_H_
