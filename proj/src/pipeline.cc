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

#include "kblink/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "kblink/error.h"
#include "kblink/feature_extractor.h"
#include "kblink/segmenter.h"
#include "kblink/unicode.h"
#include "text_io.h"

namespace kblink {

std::vector<QueryRecord> parse_queries(std::istream& in,
                                       const std::string& source) {
  std::vector<QueryRecord> out;
  internal::for_each_data_line(in, [&](std::string_view line,
                                       std::size_t line_no) {
    std::vector<std::string_view> fields = internal::split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || is_blank(fields[1])) {
      throw Error(ErrorKind::kMalformedLine,
                  "expected \"query_id<TAB>query_text\" in " + source,
                  line_no);
    }
    out.push_back({std::string(fields[0]), std::string(fields[1])});
  });
  return out;
}

std::vector<QueryRecord> load_queries(const std::string& path) {
  std::ifstream in = internal::open_input(path);
  return parse_queries(in, path);
}

std::vector<LabeledQuery> parse_labeled(std::istream& in,
                                        const std::string& source) {
  std::vector<LabeledQuery> out;
  std::map<std::string, std::size_t> position;
  internal::for_each_data_line(in, [&](std::string_view line,
                                       std::size_t line_no) {
    std::vector<std::string_view> fields = internal::split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || is_blank(fields[1]) ||
        fields[2].empty()) {
      throw Error(
          ErrorKind::kMalformedLine,
          "expected \"query_id<TAB>query_text<TAB>gold_entity_id\" in " +
              source,
          line_no);
    }
    std::string id(fields[0]);
    auto [it, fresh] = position.emplace(id, out.size());
    if (fresh) {
      out.push_back({std::move(id), std::string(fields[1]), {}});
    } else if (out[it->second].query != fields[1]) {
      throw Error(ErrorKind::kMalformedLine,
                  "conflicting query text for id \"" + id + "\" in " + source,
                  line_no);
    }
    out[it->second].gold_ids.emplace_back(fields[2]);
  });
  for (LabeledQuery& lq : out) {
    std::sort(lq.gold_ids.begin(), lq.gold_ids.end());
    lq.gold_ids.erase(std::unique(lq.gold_ids.begin(), lq.gold_ids.end()),
                      lq.gold_ids.end());
  }
  return out;
}

std::vector<LabeledQuery> load_labeled(const std::string& path) {
  std::ifstream in = internal::open_input(path);
  return parse_labeled(in, path);
}

Resources load_resources(const std::string& kb_path,
                         const std::string& embeddings_path) {
  Resources res;
  res.kb = load_kb(kb_path);
  res.dict = build_alias_dictionary(res.kb);
  res.index = CandidateIndex(res.dict);
  if (!embeddings_path.empty()) {
    res.table = load_embeddings(embeddings_path);
  }
  return res;
}

namespace {

std::vector<ScoredCandidate> score_mentions(
    const Resources& res, const std::string& text,
    const std::vector<Mention>& mentions, const ModelBundle& bundle,
    const LinkParams& params) {
  std::vector<ScoredCandidate> scored;
  for (const CandidateRef& ref :
       gather(mentions, res.dict, res.index, params.retrieval)) {
    const Entity* entity = res.kb.find(ref.entity_id);
    if (entity == nullptr) continue;
    FeatureVector features = extract(text, mentions, ref, *entity, res.table,
                                     &res.dict, params.mode);
    double score = ensemble_score(bundle.svr, bundle.mart, features);
    scored.push_back({ref, score});
  }
  return scored;
}

}  // namespace

std::vector<ScoredCandidate> score_query(const Resources& res,
                                         const std::string& text,
                                         const ModelBundle& bundle,
                                         const LinkParams& params) {
  return score_mentions(res, text, segment(text, res.dict), bundle, params);
}

std::vector<LinkAnnotation> link_query(const Resources& res,
                                       const std::string& query_id,
                                       const std::string& text,
                                       const ModelBundle& bundle,
                                       const LinkParams& params) {
  std::vector<Mention> mentions = segment(text, res.dict);
  std::vector<ScoredCandidate> scored =
      score_mentions(res, text, mentions, bundle, params);

  // Mentions are filtered independently: the cumulative threshold is a
  // per-mention budget.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ScoredCandidate>>
      by_span;
  for (ScoredCandidate& sc : scored) {
    by_span[{sc.candidate.mention.start, sc.candidate.mention.end}].push_back(
        std::move(sc));
  }
  std::vector<ScoredCandidate> kept;
  for (auto& [span, group] : by_span) {
    for (ScoredCandidate& sc : statistical_filter(std::move(group),
                                                  params.filter)) {
      kept.push_back(std::move(sc));
    }
  }

  // Annotations are surface-level, so distinct spans repeating a
  // (surface, entity) pair collapse to one; span order is kept.
  std::vector<LinkAnnotation> links;
  for (const ScoredCandidate& sc : rule_filter(text, std::move(kept), res.kb)) {
    LinkAnnotation a{query_id, sc.candidate.mention.surface,
                     sc.candidate.entity_id};
    if (std::find(links.begin(), links.end(), a) == links.end()) {
      links.push_back(std::move(a));
    }
  }
  return links;
}

std::vector<LinkAnnotation> link_queries(const Resources& res,
                                         const std::vector<QueryRecord>& input,
                                         const ModelBundle& bundle,
                                         const LinkParams& params) {
  std::vector<std::vector<LinkAnnotation>> slots(input.size());
  int threads = std::min<int>(params.threads,
                              static_cast<int>(input.size()));
  if (threads > 1) {
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= input.size()) return;
        try {
          slots[i] = link_query(res, input[i].query_id, input[i].text, bundle,
                                params);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t i = 0; i < input.size(); ++i) {
      slots[i] = link_query(res, input[i].query_id, input[i].text, bundle,
                            params);
    }
  }

  std::vector<LinkAnnotation> out;
  for (std::vector<LinkAnnotation>& slot : slots) {
    for (LinkAnnotation& a : slot) out.push_back(std::move(a));
  }
  return out;
}

void render_links_tsv(const std::vector<LinkAnnotation>& links,
                      std::ostream& out) {
  for (const LinkAnnotation& a : links) {
    out << a.query_id << '\t' << a.mention << '\t' << a.entity_id << '\n';
  }
}

ModelBundle train_bundle(const Resources& res,
                         const std::vector<LabeledQuery>& labeled,
                         const LinkParams& params, const SvrParams& svr,
                         const MartParams& mart, CoverageReport* report) {
  TrainingContext context;
  context.kb = &res.kb;
  context.dict = &res.dict;
  context.index = &res.index;
  context.table = &res.table;
  context.retrieval = params.retrieval;
  context.mode = params.mode;
  std::vector<TrainingExample> examples =
      build_training_set(labeled, context, report);
  ModelBundle bundle;
  bundle.svr = svr_train(examples, svr);
  bundle.mart = mart_train(examples, mart);
  return bundle;
}

void dump_features(const Resources& res,
                   const std::vector<QueryRecord>& input,
                   const LinkParams& params, std::ostream& out) {
  char buf[64];
  for (const QueryRecord& record : input) {
    std::vector<Mention> mentions = segment(record.text, res.dict);
    for (const CandidateRef& ref :
         gather(mentions, res.dict, res.index, params.retrieval)) {
      const Entity* entity = res.kb.find(ref.entity_id);
      if (entity == nullptr) continue;
      FeatureVector features = extract(record.text, mentions, ref, *entity,
                                       res.table, &res.dict, params.mode);
      out << record.query_id << '\t' << ref.mention.surface << '\t'
          << ref.entity_id;
      for (double f : features) {
        std::snprintf(buf, sizeof(buf), "\t%.9f", f);
        out << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace kblink
