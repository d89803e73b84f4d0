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

#include "kblink/ensemble_scorer.h"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kblink/candidate_gen.h"
#include "kblink/error.h"

namespace kblink {
namespace {

TrainingExample example(double f0, double label) {
  TrainingExample ex;
  ex.features[0] = f0;
  ex.label = label;
  return ex;
}

// 200 points with label 0.5 * f0 + 0.2, f0 uniform in [0,1].
std::vector<TrainingExample> linear_data() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 200; ++i) {
    double f0 = uniform(rng);
    data.push_back(example(f0, 0.5 * f0 + 0.2));
  }
  return data;
}

double svr_mse(const SvrModel& model, const std::vector<TrainingExample>& data) {
  double mse = 0.0;
  for (const TrainingExample& ex : data) {
    double d = svr_predict(model, ex.features) - ex.label;
    mse += d * d;
  }
  return mse / static_cast<double>(data.size());
}

TEST_CASE("training rejects an empty example set") {
  CHECK_THROWS_AS(svr_train({}), Error);
  CHECK_THROWS_AS(mart_train({}), Error);
  try {
    svr_train({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyTrainingSet);
  }
}

TEST_CASE("svr fits a single example closely with zero epsilon") {
  SvrParams params;
  params.epsilon = 0.0;
  SvrModel model = svr_train({example(0.5, 0.7)}, params);
  CHECK(std::abs(svr_predict(model, example(0.5, 0.7).features) - 0.7) <=
        0.05);
}

TEST_CASE("svr recovers a linear relation") {
  std::vector<TrainingExample> data = linear_data();
  SvrModel model = svr_train(data);
  CHECK(svr_mse(model, data) < 1e-2);
}

TEST_CASE("svr training is deterministic for a fixed seed") {
  std::vector<TrainingExample> data = linear_data();
  SvrModel a = svr_train(data);
  SvrModel b = svr_train(data);
  CHECK(a.weights == b.weights);  // bitwise
  CHECK(a.bias == b.bias);
}

TEST_CASE("mart on constant labels reduces to the base score") {
  std::vector<TrainingExample> data;
  for (int i = 0; i < 10; ++i) data.push_back(example(i * 0.1, 0.4));
  MartModel model = mart_train(data);
  CHECK(model.base_score == doctest::Approx(0.4));
  for (const TrainingExample& ex : data) {
    CHECK(mart_predict(model, ex.features) == doctest::Approx(0.4));
  }
  for (double mse : model.stage_mse) CHECK(mse == doctest::Approx(0.0));
}

TEST_CASE("mart captures a pure interaction at depth two") {
  // Labels depend only on xor(f1, f3): no single split has any gain, so the
  // builder must take a zero-gain split and realize the gain in the children.
  std::vector<TrainingExample> data;
  for (int i = 0; i < 200; ++i) {
    TrainingExample ex;
    ex.features[1] = static_cast<double>(i % 2);
    ex.features[3] = static_cast<double>((i / 2) % 2);
    ex.label = (i % 2) != ((i / 2) % 2) ? 1.0 : 0.0;
    data.push_back(ex);
  }
  MartParams params;
  params.max_depth = 2;
  MartModel model = mart_train(data, params);
  double mse = 0.0;
  for (const TrainingExample& ex : data) {
    double d = mart_predict(model, ex.features) - ex.label;
    mse += d * d;
  }
  mse /= static_cast<double>(data.size());
  CHECK(mse < 0.05);
}

TEST_CASE("mart stage error never increases") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 60; ++i) {
    TrainingExample ex;
    for (double& f : ex.features) f = uniform(rng);
    ex.label = uniform(rng);
    data.push_back(ex);
  }
  MartModel model = mart_train(data);
  REQUIRE(model.stage_mse.size() == 100);
  for (std::size_t t = 1; t < model.stage_mse.size(); ++t) {
    CHECK(model.stage_mse[t] <= model.stage_mse[t - 1] + 1e-12);
  }
}

TEST_CASE("ensemble_score averages the two clamped predictions") {
  SvrModel svr;  // zero weights
  MartModel mart;
  FeatureVector x{};

  svr.bias = 0.8;
  mart.base_score = 0.4;
  CHECK(ensemble_score(svr, mart, x) == doctest::Approx(0.6));

  svr.bias = 1.5;   // clamps to 1
  mart.base_score = -0.5;  // clamps to 0
  CHECK(ensemble_score(svr, mart, x) == doctest::Approx(0.5));

  svr.bias = -2.0;
  mart.base_score = -1.0;
  CHECK(ensemble_score(svr, mart, x) == doctest::Approx(0.0));
}

ModelBundle trained_bundle() {
  std::vector<TrainingExample> data = linear_data();
  ModelBundle bundle;
  bundle.svr = svr_train(data);
  MartParams mp;
  mp.num_trees = 5;
  bundle.mart = mart_train(data, mp);
  return bundle;
}

TEST_CASE("model save/load round-trips bitwise") {
  ModelBundle bundle = trained_bundle();
  std::ostringstream out(std::ios::binary);
  save_model(bundle, out);
  std::istringstream in(out.str(), std::ios::binary);
  ModelBundle loaded = load_model(in, "buffer");

  CHECK(loaded.svr.weights == bundle.svr.weights);
  CHECK(loaded.svr.bias == bundle.svr.bias);
  CHECK(loaded.svr.params.c == bundle.svr.params.c);
  CHECK(loaded.svr.params.epsilon == bundle.svr.params.epsilon);
  CHECK(loaded.svr.params.epochs == bundle.svr.params.epochs);
  CHECK(loaded.svr.params.seed == bundle.svr.params.seed);
  CHECK(loaded.mart.base_score == bundle.mart.base_score);
  CHECK(loaded.mart.learning_rate == bundle.mart.learning_rate);
  CHECK(loaded.mart.trees.size() == bundle.mart.trees.size());

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    FeatureVector x;
    for (double& f : x) f = uniform(rng);
    CHECK(ensemble_score(loaded.svr, loaded.mart, x) ==
          ensemble_score(bundle.svr, bundle.mart, x));  // bitwise
  }
}

ErrorKind load_failure(std::string bytes) {
  std::istringstream in(std::move(bytes), std::ios::binary);
  try {
    load_model(in, "buffer");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected load_model to throw");
  return ErrorKind::kIoError;
}

TEST_CASE("model loading rejects damaged input") {
  ModelBundle bundle = trained_bundle();
  std::ostringstream out(std::ios::binary);
  save_model(bundle, out);
  const std::string good = out.str();

  CHECK(load_failure(good.substr(0, good.size() / 2)) ==
        ErrorKind::kCorruptModel);
  CHECK(load_failure(good.substr(0, 3)) == ErrorKind::kCorruptModel);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(load_failure(bad_magic) == ErrorKind::kCorruptModel);

  std::string bad_version = good;
  bad_version[4] = 2;  // little-endian u32 version right after the magic
  CHECK(load_failure(bad_version) == ErrorKind::kVersionMismatch);

  CHECK(load_failure(good + '\0') == ErrorKind::kCorruptModel);

  // The unmodified buffer still loads.
  std::istringstream in(good, std::ios::binary);
  CHECK_NOTHROW(load_model(in, "buffer"));
}

TEST_CASE("build_training_set labels candidates against the gold set") {
  KnowledgeBase kb;
  Entity& e1 = kb.obtain("e1");
  e1.name = "苹果";
  e1.description = {{"类别", "水果"}};
  Entity& e2 = kb.obtain("e2");
  e2.name = "苹果公司";
  e2.description = {{"简介", "手机厂商"}};

  AliasDictionary dict;
  dict.insert("苹果", "e1", Provenance::kOriginal);
  dict.insert("苹果公司", "e2", Provenance::kOriginal);
  CandidateIndex index(dict);
  EmbeddingTable table(2);
  TrainingContext context{&kb, &dict, &index, &table, RetrievalParams{},
                          SimilarityMode::kCosine};

  std::vector<LabeledQuery> labeled{
      {"q1", "苹果很甜", {"e1"}},
      {"q2", "西瓜好吃", {"e9"}},        // nothing retrievable
      {"q3", "在苹果公司上班", {"e7"}},  // candidates exist, gold does not
  };
  CoverageReport report;
  std::vector<TrainingExample> examples =
      build_training_set(labeled, context, &report);

  REQUIRE(examples.size() == 3);
  CHECK(examples[0].query_id == "q1");
  CHECK(examples[0].entity_id == "e1");
  CHECK(examples[0].label == 1.0);
  CHECK(examples[1].query_id == "q3");
  CHECK(examples[1].label == 0.0);
  CHECK(examples[2].query_id == "q3");
  CHECK(examples[2].label == 0.0);

  CHECK(report.gold_total == 3);
  CHECK(report.gold_matched == 1);
  CHECK(report.positives == 1);
  CHECK(report.negatives == 2);
  CHECK(report.coverage() == doctest::Approx(1.0 / 3.0));
  REQUIRE(report.misses.size() == 2);
  CHECK(report.misses[0] == std::pair<std::string, std::string>("q2", "e9"));
  CHECK(report.misses[1] == std::pair<std::string, std::string>("q3", "e7"));
}

}  // namespace
}  // namespace kblink
