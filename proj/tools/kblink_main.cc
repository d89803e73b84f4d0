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

// kblink command line: build the alias dictionary, train the scorers, link
// queries, and score predictions against gold annotations.

#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "kblink/error.h"
#include "kblink/pipeline.h"

namespace {

// `-` selects the standard stream.
std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) {
    throw kblink::Error(kblink::ErrorKind::kIoError,
                        "cannot open file for writing: " + path);
  }
  return file;
}

struct Options {
  std::string kb_path;
  std::string embeddings_path;
  std::string model_path;
  std::string queries_path;
  std::string labeled_path;
  std::string gold_path;
  std::string predicted_path;
  std::string out_path = "-";
  bool per_query = false;

  std::int64_t seed = 42;
  kblink::LinkParams link;
  kblink::SvrParams svr;
  kblink::MartParams mart;
};

void add_kb_flags(CLI::App* cmd, Options& opt, bool with_embeddings) {
  cmd->add_option("--kb", opt.kb_path, "knowledge base TSV")
      ->required()
      ->check(CLI::ExistingFile);
  if (with_embeddings) {
    cmd->add_option("--embeddings", opt.embeddings_path,
                    "word vector text file (optional)")
        ->check(CLI::ExistingFile);
  }
}

int run_build_kb(const Options& opt) {
  kblink::KnowledgeBase kb = kblink::load_kb(opt.kb_path);
  kblink::AliasDictionary dict = kblink::build_alias_dictionary(kb);
  std::ofstream file;
  std::ostream& out = open_output(opt.out_path, file);
  kblink::dump_aliases(dict, out);
  std::cerr << dict.surface_count() << " alias surfaces for " << kb.size()
            << " entities\n";
  return 0;
}

int run_train(const Options& opt) {
  kblink::Resources res =
      kblink::load_resources(opt.kb_path, opt.embeddings_path);
  std::vector<kblink::LabeledQuery> labeled =
      kblink::load_labeled(opt.labeled_path);
  kblink::CoverageReport coverage;
  kblink::ModelBundle bundle = kblink::train_bundle(
      res, labeled, opt.link, opt.svr, opt.mart, &coverage);
  kblink::save_model(bundle, opt.out_path);
  if (coverage.positives == 0 || coverage.negatives == 0) {
    std::cerr << "warning: training set has " << coverage.positives
              << " positive and " << coverage.negatives
              << " negative examples; the fit will be degenerate\n";
  }
  std::cerr << "gold coverage: " << coverage.gold_matched << "/"
            << coverage.gold_total << "\n";
  for (const auto& [query_id, entity_id] : coverage.misses) {
    std::cerr << "no candidate for gold " << entity_id << " of query "
              << query_id << "\n";
  }
  return 0;
}

int run_link(const Options& opt) {
  kblink::Resources res =
      kblink::load_resources(opt.kb_path, opt.embeddings_path);
  kblink::ModelBundle bundle = kblink::load_model(opt.model_path);
  std::vector<kblink::QueryRecord> queries =
      kblink::load_queries(opt.queries_path);
  std::vector<kblink::LinkAnnotation> links =
      kblink::link_queries(res, queries, bundle, opt.link);
  std::ofstream file;
  std::ostream& out = open_output(opt.out_path, file);
  kblink::render_links_tsv(links, out);
  return 0;
}

int run_evaluate(const Options& opt) {
  std::vector<kblink::LinkAnnotation> gold =
      kblink::load_annotations(opt.gold_path);
  std::vector<kblink::LinkAnnotation> predicted =
      kblink::load_annotations(opt.predicted_path);
  kblink::MetricsReport report = kblink::evaluate(gold, predicted);
  std::ofstream file;
  std::ostream& out = open_output(opt.out_path, file);
  kblink::write_metrics(report, out, opt.per_query);
  return 0;
}

int run_features(const Options& opt) {
  kblink::Resources res =
      kblink::load_resources(opt.kb_path, opt.embeddings_path);
  std::vector<kblink::QueryRecord> queries =
      kblink::load_queries(opt.queries_path);
  std::ofstream file;
  std::ostream& out = open_output(opt.out_path, file);
  kblink::dump_features(res, queries, opt.link, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chinese entity recognition and linking over a TSV knowledge "
               "base"};
  app.require_subcommand(1);
  // Let shared flags (--seed, --alpha, ...) appear after the subcommand too.
  app.fallthrough();
  Options opt;

  app.add_option("--seed", opt.seed, "RNG seed for training")
      ->capture_default_str();
  app.add_option("--alpha", opt.link.filter.alpha,
                 "cumulative score threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--k", opt.link.filter.k, "candidates kept per mention")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--fuzzy-threshold", opt.link.retrieval.fuzzy_threshold,
                 "minimum bigram Jaccard for fuzzy alias hits")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--max-hits", opt.link.retrieval.max_hits,
                 "retrieval cap per mention")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  std::map<std::string, kblink::SimilarityMode> modes{
      {"cosine", kblink::SimilarityMode::kCosine},
      {"sum-norm", kblink::SimilarityMode::kSumNorm}};
  app.add_option("--sim2-mode", opt.link.mode,
                 "word-vector similarity: cosine or sum-norm")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--threads", opt.link.threads, "worker threads for link")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* build_kb =
      app.add_subcommand("build-kb", "dump the expanded alias dictionary");
  add_kb_flags(build_kb, opt, false);
  build_kb->add_option("--out", opt.out_path, "output TSV ('-' = stdout)")
      ->capture_default_str();

  CLI::App* train = app.add_subcommand("train", "fit the candidate scorers");
  add_kb_flags(train, opt, true);
  train->add_option("--labeled", opt.labeled_path,
                    "TSV query_id, query, gold entity id")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", opt.out_path, "model bundle path")->required();
  train->add_option("--svr-c", opt.svr.c, "SVR regularization weight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--svr-epsilon", opt.svr.epsilon,
                    "SVR insensitive-tube width")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train->add_option("--svr-epochs", opt.svr.epochs, "SVR epoch budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--trees", opt.mart.num_trees, "boosting stages")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--depth", opt.mart.max_depth, "tree depth limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--min-leaf", opt.mart.min_leaf,
                    "minimum samples per leaf")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--learning-rate", opt.mart.learning_rate,
                    "boosting shrinkage")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0))
      ->capture_default_str();

  CLI::App* link = app.add_subcommand("link", "link queries to entities");
  add_kb_flags(link, opt, true);
  link->add_option("--model", opt.model_path, "trained model bundle")
      ->required()
      ->check(CLI::ExistingFile);
  link->add_option("--queries", opt.queries_path, "TSV query_id, query text")
      ->required()
      ->check(CLI::ExistingFile);
  link->add_option("--out", opt.out_path, "output TSV ('-' = stdout)")
      ->capture_default_str();

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score predictions against gold links");
  evaluate->add_option("--gold", opt.gold_path, "gold annotation TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate
      ->add_option("--predicted", opt.predicted_path, "predicted link TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", opt.out_path, "metrics output ('-' = stdout)")
      ->capture_default_str();
  evaluate->add_flag("--per-query", opt.per_query,
                     "also print per-query precision/recall/F1");

  CLI::App* features =
      app.add_subcommand("features", "dump per-candidate feature vectors");
  add_kb_flags(features, opt, true);
  features
      ->add_option("--queries", opt.queries_path, "TSV query_id, query text")
      ->required()
      ->check(CLI::ExistingFile);
  features->add_option("--out", opt.out_path, "output TSV ('-' = stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  opt.svr.seed = opt.seed;
  opt.mart.seed = opt.seed;

  try {
    if (build_kb->parsed()) return run_build_kb(opt);
    if (train->parsed()) return run_train(opt);
    if (link->parsed()) return run_link(opt);
    if (evaluate->parsed()) return run_evaluate(opt);
    if (features->parsed()) return run_features(opt);
  } catch (const kblink::Error& e) {
    std::cerr << "error: " << e.what();
    if (e.line() != 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
