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

#include "kblink/error.h"

namespace kblink {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIoError: return "io_error";
    case ErrorKind::kMalformedLine: return "malformed_line";
    case ErrorKind::kMissingName: return "missing_name";
    case ErrorKind::kMalformedHeader: return "malformed_header";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kNonFiniteValue: return "non_finite_value";
    case ErrorKind::kEmptyQuery: return "empty_query";
    case ErrorKind::kEmptyTrainingSet: return "empty_training_set";
    case ErrorKind::kVersionMismatch: return "version_mismatch";
    case ErrorKind::kCorruptModel: return "corrupt_model";
    case ErrorKind::kDuplicateGold: return "duplicate_gold";
  }
  return "unknown";
}

}  // namespace kblink
