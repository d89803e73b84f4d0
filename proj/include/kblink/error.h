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

#ifndef KBLINK_ERROR_H_
#define KBLINK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kblink {

// Every recoverable failure in the library is reported as an Error with one
// of these kinds. The CLI maps them to exit code 2.
enum class ErrorKind {
  kIoError,           // file cannot be opened or written
  kMalformedLine,     // a data line does not match the expected format
  kMissingName,       // a KB subject has no `name` triple
  kMalformedHeader,   // embedding file header is not `<count> <dim>`
  kDimensionMismatch, // vector length differs from the declared dimension
  kNonFiniteValue,    // an embedding component is NaN or infinite
  kEmptyQuery,        // query is empty after trimming
  kEmptyTrainingSet,  // training requested with no examples
  kVersionMismatch,   // model file has an unsupported format version
  kCorruptModel,      // model file is truncated or structurally invalid
  kDuplicateGold,     // gold annotations contain a repeated triple
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  ErrorKind kind() const { return kind_; }

  // 1-based line number for file-format errors, 0 when not applicable.
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace kblink

#endif  // KBLINK_ERROR_H_
