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

#ifndef KBLINK_EMBEDDING_STORE_H_
#define KBLINK_EMBEDDING_STORE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kblink {

// How two word vectors are compared.
//   kCosine:      w.m / (|w| * |m|)
//   kSumNorm:     w.m / (|w| + |m|)
enum class SimilarityMode { kCosine, kSumNorm };

std::optional<SimilarityMode> similarity_mode_from_string(std::string_view s);
const char* to_string(SimilarityMode mode);

// Similarity of two equal-length vectors under `mode`. Returns -1 (the
// missing-embedding default) whenever either vector has zero norm. Throws
// on dimension mismatch.
double similarity2(const std::vector<double>& w, const std::vector<double>& m,
                   SimilarityMode mode = SimilarityMode::kCosine);

// Fixed-dimension word vector table. An out-of-vocabulary word falls back
// to the average of its characters' vectors, but only when every character
// is in vocabulary.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  // Inserts or replaces. Throws kDimensionMismatch / kNonFiniteValue.
  void insert(std::string word, std::vector<double> vec);

  const std::vector<double>* find(std::string_view word) const;

  // The word's vector, the character-average fallback, or nullopt when the
  // word is missing and at least one character is missing too.
  std::optional<std::vector<double>> vector_for(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Text format: header "<count> <dim>", then one "<word> v1 .. vdim" line
// per word, space separated.
EmbeddingTable parse_embeddings(std::istream& in, const std::string& source);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace kblink

#endif  // KBLINK_EMBEDDING_STORE_H_
