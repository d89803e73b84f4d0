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

#ifndef KBLINK_UNICODE_H_
#define KBLINK_UNICODE_H_

#include <string>
#include <string_view>

namespace kblink {

// Decodes UTF-8 into Unicode scalar values. Invalid byte sequences decode to
// one U+FFFD per offending byte, so decoding never fails.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t cp);

// Number of Unicode scalar values in `text`. All span offsets in the library
// count scalar values, not bytes.
std::size_t count_chars(std::string_view text);

bool is_ascii_digit(char32_t cp);
bool is_ascii_alpha(char32_t cp);
bool is_ascii_alnum(char32_t cp);

// CJK unified ideographs (base block, extensions, compatibility block).
bool is_cjk(char32_t cp);

// ASCII whitespace plus the ideographic space U+3000.
bool is_space(char32_t cp);

// ASCII punctuation, the interpunct U+00B7, general punctuation
// (U+2000..U+206F), CJK symbols and punctuation (U+3000..U+303F), and the
// fullwidth punctuation ranges of U+FF00..U+FF65.
bool is_punct(char32_t cp);

// True when `text` is empty or consists only of is_space characters.
bool is_blank(std::string_view text);

// Removes leading and trailing is_space characters.
std::string trim(std::string_view text);

}  // namespace kblink

#endif  // KBLINK_UNICODE_H_
