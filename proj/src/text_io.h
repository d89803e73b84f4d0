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

// Internal line/record helpers shared by the file loaders.

#ifndef KBLINK_SRC_TEXT_IO_H_
#define KBLINK_SRC_TEXT_IO_H_

#include <fstream>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "kblink/error.h"

namespace kblink::internal {

// Calls `fn(line, line_no)` for every line of `in`, with trailing "\r"
// stripped. Line numbers are 1-based and count every physical line.
inline void for_each_line(
    std::istream& in,
    const std::function<void(std::string_view, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line, line_no);
  }
}

// As above but skips blank lines and `#` comments.
inline void for_each_data_line(
    std::istream& in,
    const std::function<void(std::string_view, std::size_t)>& fn) {
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    fn(line, line_no);
  });
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIoError, "cannot open file: " + path);
  }
  return in;
}

}  // namespace kblink::internal

#endif  // KBLINK_SRC_TEXT_IO_H_
