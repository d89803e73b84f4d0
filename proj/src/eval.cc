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

#include "kblink/eval.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "kblink/error.h"
#include "text_io.h"

namespace kblink {

namespace {

double ratio(std::size_t hits, std::size_t total, bool other_side_empty) {
  if (total == 0) return other_side_empty ? 1.0 : 0.0;
  return static_cast<double>(hits) / static_cast<double>(total);
}

double f1_of(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace

MetricsReport evaluate(const std::vector<LinkAnnotation>& gold,
                       const std::vector<LinkAnnotation>& predicted) {
  std::set<LinkAnnotation> gold_set;
  for (const LinkAnnotation& a : gold) {
    if (!gold_set.insert(a).second) {
      throw Error(ErrorKind::kDuplicateGold,
                  "gold repeats (" + a.query_id + ", " + a.mention + ", " +
                      a.entity_id + ")");
    }
  }
  std::set<LinkAnnotation> pred_set(predicted.begin(), predicted.end());

  std::size_t correct = 0;
  for (const LinkAnnotation& a : pred_set) correct += gold_set.count(a);

  MetricsReport report;
  report.precision = ratio(correct, pred_set.size(), gold_set.empty());
  report.recall = ratio(correct, gold_set.size(), pred_set.empty());
  report.link_f1 = f1_of(report.precision, report.recall);

  std::map<std::string, std::pair<std::set<LinkAnnotation>,
                                  std::set<LinkAnnotation>>> by_query;
  for (const LinkAnnotation& a : gold_set) by_query[a.query_id].first.insert(a);
  for (const LinkAnnotation& a : pred_set) {
    by_query[a.query_id].second.insert(a);
  }

  std::size_t gold_bearing = 0;
  double f1_sum = 0.0;
  for (const auto& [query_id, sets] : by_query) {
    const auto& [g, p] = sets;
    std::size_t hits = 0;
    for (const LinkAnnotation& a : p) hits += g.count(a);
    PerQueryScore score;
    score.precision = ratio(hits, p.size(), g.empty());
    score.recall = ratio(hits, g.size(), p.empty());
    score.f1 = f1_of(score.precision, score.recall);
    report.per_query[query_id] = score;
    if (!g.empty()) {
      ++gold_bearing;
      f1_sum += score.f1;
    }
  }
  if (gold_bearing > 0) {
    report.average_f1 = f1_sum / static_cast<double>(gold_bearing);
  } else {
    report.average_f1 = pred_set.empty() ? 1.0 : 0.0;
  }
  return report;
}

std::vector<LinkAnnotation> parse_annotations(std::istream& in,
                                              const std::string& source) {
  std::vector<LinkAnnotation> out;
  internal::for_each_data_line(in, [&](std::string_view line,
                                       std::size_t line_no) {
    std::vector<std::string_view> fields = internal::split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw Error(ErrorKind::kMalformedLine,
                  "expected \"query_id<TAB>mention<TAB>entity_id\" in " +
                      source,
                  line_no);
    }
    out.push_back({std::string(fields[0]), std::string(fields[1]),
                   std::string(fields[2])});
  });
  return out;
}

std::vector<LinkAnnotation> load_annotations(const std::string& path) {
  std::ifstream in = internal::open_input(path);
  return parse_annotations(in, path);
}

void write_metrics(const MetricsReport& report, std::ostream& out,
                   bool per_query) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "precision\t%.4f\nrecall\t%.4f\nlink_f1\t%.4f\n"
                "average_f1\t%.4f\n",
                report.precision, report.recall, report.link_f1,
                report.average_f1);
  out << buf;
  if (!per_query) return;
  for (const auto& [query_id, score] : report.per_query) {
    std::snprintf(buf, sizeof(buf), "query\t%s\t%.4f\t%.4f\t%.4f\n",
                  query_id.c_str(), score.precision, score.recall, score.f1);
    out << buf;
  }
}

}  // namespace kblink
