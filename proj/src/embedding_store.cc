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

#include "kblink/embedding_store.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kblink/error.h"
#include "kblink/unicode.h"
#include "text_io.h"

namespace kblink {

std::optional<SimilarityMode> similarity_mode_from_string(std::string_view s) {
  if (s == "cosine") return SimilarityMode::kCosine;
  if (s == "sum-norm") return SimilarityMode::kSumNorm;
  return std::nullopt;
}

const char* to_string(SimilarityMode mode) {
  return mode == SimilarityMode::kCosine ? "cosine" : "sum-norm";
}

double similarity2(const std::vector<double>& w, const std::vector<double>& m,
                   SimilarityMode mode) {
  if (w.size() != m.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "similarity of vectors with dimensions " +
                    std::to_string(w.size()) + " and " +
                    std::to_string(m.size()));
  }
  double dot = 0.0;
  double nw = 0.0;
  double nm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    dot += w[i] * m[i];
    nw += w[i] * w[i];
    nm += m[i] * m[i];
  }
  if (nw == 0.0 || nm == 0.0) return -1.0;  // missing-embedding default
  nw = std::sqrt(nw);
  nm = std::sqrt(nm);
  if (mode == SimilarityMode::kCosine) return dot / (nw * nm);
  return dot / (nw + nm);
}

void EmbeddingTable::insert(std::string word, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "vector for \"" + word + "\" has " +
                    std::to_string(vec.size()) + " components, expected " +
                    std::to_string(dim_));
  }
  for (double v : vec) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNonFiniteValue,
                  "non-finite component in vector for \"" + word + "\"");
    }
  }
  vectors_[std::move(word)] = std::move(vec);
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::vector_for(
    std::string_view word) const {
  if (const std::vector<double>* direct = find(word)) return *direct;
  std::u32string chars = decode_utf8(word);
  if (chars.size() < 2) return std::nullopt;  // a 1-char word IS its character
  std::vector<double> sum(dim_, 0.0);
  for (char32_t c : chars) {
    const std::vector<double>* v = find(encode_utf8(c));
    if (v == nullptr) return std::nullopt;
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += (*v)[i];
  }
  for (double& s : sum) s /= static_cast<double>(chars.size());
  return sum;
}

EmbeddingTable parse_embeddings(std::istream& in, const std::string& source) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorKind::kMalformedHeader, "empty embedding file: " + source,
                1);
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::istringstream hs(header);
  long long count = -1;
  long long dim = -1;
  std::string extra;
  if (!(hs >> count >> dim) || (hs >> extra) || count < 0 || dim <= 0) {
    throw Error(ErrorKind::kMalformedHeader,
                "expected \"<count> <dimension>\" header in " + source, 1);
  }

  EmbeddingTable table(static_cast<std::size_t>(dim));
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> vec;
    vec.reserve(static_cast<std::size_t>(dim));
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        throw Error(ErrorKind::kNonFiniteValue,
                    "unparsable component \"" + tok + "\" in " + source,
                    line_no);
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kNonFiniteValue,
                    "non-finite component for \"" + word + "\" in " + source,
                    line_no);
      }
      vec.push_back(v);
    }
    if (vec.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "vector for \"" + word + "\" has " +
                      std::to_string(vec.size()) + " components, expected " +
                      std::to_string(dim) + " in " + source,
                  line_no);
    }
    if (table.find(word) == nullptr) {  // repeated words keep the first
      table.insert(std::move(word), std::move(vec));
    }
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in = internal::open_input(path);
  return parse_embeddings(in, path);
}

}  // namespace kblink
