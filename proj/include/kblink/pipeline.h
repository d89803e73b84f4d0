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

#ifndef KBLINK_PIPELINE_H_
#define KBLINK_PIPELINE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "kblink/candidate_gen.h"
#include "kblink/embedding_store.h"
#include "kblink/ensemble_scorer.h"
#include "kblink/eval.h"
#include "kblink/kb_store.h"
#include "kblink/link_annotation.h"
#include "kblink/result_filter.h"

namespace kblink {

struct QueryRecord {
  std::string query_id;
  std::string text;
};

// TSV `query_id <TAB> query_text`; text must not be blank.
std::vector<QueryRecord> parse_queries(std::istream& in,
                                       const std::string& source);
std::vector<QueryRecord> load_queries(const std::string& path);

// TSV `query_id <TAB> query_text <TAB> gold_entity_id`, one row per gold
// link; rows sharing a query_id are merged (their text must agree).
std::vector<LabeledQuery> parse_labeled(std::istream& in,
                                        const std::string& source);
std::vector<LabeledQuery> load_labeled(const std::string& path);

// Everything immutable a link/train run needs.
struct Resources {
  KnowledgeBase kb;
  AliasDictionary dict;
  CandidateIndex index;
  EmbeddingTable table;
};

// Loads the KB, builds the alias dictionary and its fuzzy index, and loads
// embeddings (optional: empty path gives an empty zero-dimension table).
Resources load_resources(const std::string& kb_path,
                         const std::string& embeddings_path);

struct LinkParams {
  RetrievalParams retrieval;
  FilterParams filter;
  SimilarityMode mode = SimilarityMode::kCosine;
  int threads = 1;  // <= 1 means sequential
};

// Every scored candidate of one query, before filtering.
std::vector<ScoredCandidate> score_query(const Resources& res,
                                         const std::string& text,
                                         const ModelBundle& bundle,
                                         const LinkParams& params);

// Full per-query pipeline: segment, gather, extract, score, per-mention
// cumulative-threshold filter, hand rules. Annotations are unique and
// ordered by (mention start, entity id).
std::vector<LinkAnnotation> link_query(const Resources& res,
                                       const std::string& query_id,
                                       const std::string& text,
                                       const ModelBundle& bundle,
                                       const LinkParams& params);

// Batch variant; output order follows the input query order, so results are
// byte-identical for any thread count.
std::vector<LinkAnnotation> link_queries(const Resources& res,
                                         const std::vector<QueryRecord>& input,
                                         const ModelBundle& bundle,
                                         const LinkParams& params);

void render_links_tsv(const std::vector<LinkAnnotation>& links,
                      std::ostream& out);

// Trains both scorers on the labeled queries. `report`, when given,
// receives gold candidate coverage.
ModelBundle train_bundle(const Resources& res,
                         const std::vector<LabeledQuery>& labeled,
                         const LinkParams& params, const SvrParams& svr,
                         const MartParams& mart,
                         CoverageReport* report = nullptr);

// Debug TSV: query_id, mention, entity_id, the nine feature values (9
// decimal places), one row per candidate.
void dump_features(const Resources& res,
                   const std::vector<QueryRecord>& input,
                   const LinkParams& params, std::ostream& out);

}  // namespace kblink

#endif  // KBLINK_PIPELINE_H_
