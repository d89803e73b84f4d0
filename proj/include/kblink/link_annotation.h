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

#ifndef KBLINK_LINK_ANNOTATION_H_
#define KBLINK_LINK_ANNOTATION_H_

#include <string>
#include <tuple>

namespace kblink {

// One resolved link: mention surface of `query_id` linked to `entity_id`.
struct LinkAnnotation {
  std::string query_id;
  std::string mention;
  std::string entity_id;

  friend bool operator==(const LinkAnnotation&,
                         const LinkAnnotation&) = default;
  friend bool operator<(const LinkAnnotation& a, const LinkAnnotation& b) {
    return std::tie(a.query_id, a.mention, a.entity_id) <
           std::tie(b.query_id, b.mention, b.entity_id);
  }
};

}  // namespace kblink

#endif  // KBLINK_LINK_ANNOTATION_H_
