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

#ifndef KBLINK_ENSEMBLE_SCORER_H_
#define KBLINK_ENSEMBLE_SCORER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kblink/embedding_store.h"
#include "kblink/feature_extractor.h"
#include "kblink/kb_store.h"

namespace kblink {

struct TrainingExample {
  FeatureVector features{};
  double label = 0.0;  // exactly 0.0 or 1.0
  std::string query_id;
  std::string entity_id;
};

// ---------------------------------------------------------------------------
// Linear epsilon-insensitive support vector regression.

struct SvrParams {
  double c = 1.0;
  double epsilon = 0.1;
  int epochs = 500;
  std::int64_t seed = 42;
};

struct SvrModel {
  std::vector<double> weights = std::vector<double>(kFeatureCount, 0.0);
  double bias = 0.0;
  SvrParams params;
};

// Deterministic full-batch subgradient descent on
//   C * sum_i max(0, |y_i - (w.x_i + b)| - epsilon) + 0.5*|w|^2.
// Returns the iterate with the lowest objective seen. Stops early once the
// objective has improved by less than 1e-6 over ten consecutive epochs.
SvrModel svr_train(const std::vector<TrainingExample>& data,
                   const SvrParams& params = {});

// clamp(w.x + b, 0, 1).
double svr_predict(const SvrModel& model, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Gradient-boosted regression trees, least-squares loss.

struct MartParams {
  int num_trees = 100;
  int max_depth = 3;
  int min_leaf = 2;
  double learning_rate = 0.1;
  std::int64_t seed = 42;  // reserved; greedy fitting uses no randomness
};

// Flat node array; index 0 is the root. feature < 0 marks a leaf.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  double value = 0.0;      // leaf prediction
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict(const FeatureVector& x) const;
};

struct MartModel {
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  MartParams params;
  // Training MSE after each boosting stage; stage_mse[t] <= stage_mse[t-1]
  // + 1e-12 by construction. Not serialized.
  std::vector<double> stage_mse;
};

MartModel mart_train(const std::vector<TrainingExample>& data,
                     const MartParams& params = {});

// clamp(base + lr * sum_t tree_t(x), 0, 1).
double mart_predict(const MartModel& model, const FeatureVector& x);

// Mean of the two clamped predictions; always in [0,1].
double ensemble_score(const SvrModel& svr, const MartModel& mart,
                      const FeatureVector& x);

// ---------------------------------------------------------------------------
// Serialization. Versioned length-checked binary; see docs/model-format.md.

struct ModelBundle {
  SvrModel svr;
  MartModel mart;
};

void save_model(const ModelBundle& bundle, std::ostream& out);
void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(std::istream& in, const std::string& source);
ModelBundle load_model(const std::string& path);

// ---------------------------------------------------------------------------
// Training-set assembly.

struct LabeledQuery {
  std::string query_id;
  std::string query;
  std::vector<std::string> gold_ids;  // sorted unique
};

struct CoverageReport {
  std::size_t gold_total = 0;    // (query, gold id) pairs
  std::size_t gold_matched = 0;  // pairs whose id appeared among candidates
  std::size_t positives = 0;     // examples labeled 1.0
  std::size_t negatives = 0;     // examples labeled 0.0
  std::vector<std::pair<std::string, std::string>> misses;  // (query_id, id)
  double coverage() const {
    return gold_total == 0
               ? 1.0
               : static_cast<double>(gold_matched) /
                     static_cast<double>(gold_total);
  }
};

struct TrainingContext {
  const KnowledgeBase* kb = nullptr;
  const AliasDictionary* dict = nullptr;
  const CandidateIndex* index = nullptr;
  const EmbeddingTable* table = nullptr;
  RetrievalParams retrieval;
  SimilarityMode mode = SimilarityMode::kCosine;
};

// Candidate generation + feature extraction over each labeled query; a
// candidate is a positive example iff its entity id is in the query's gold
// set. `report`, when given, receives gold coverage.
std::vector<TrainingExample> build_training_set(
    const std::vector<LabeledQuery>& labeled, const TrainingContext& context,
    CoverageReport* report = nullptr);

}  // namespace kblink

#endif  // KBLINK_ENSEMBLE_SCORER_H_
