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

// Acceptance checks for the linking pipeline. Each criterion prints one
// PASS/FAIL line; the process exits nonzero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kblink/ensemble_scorer.h"
#include "kblink/eval.h"
#include "kblink/feature_extractor.h"
#include "kblink/pipeline.h"
#include "kblink/result_filter.h"
#include "kblink/unicode.h"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::string kCli = KBLINK_CLI_PATH;
const std::string kFixtures = KBLINK_FIXTURE_DIR;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool run_cli(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

kblink::ScoredCandidate sc(const char* surface, std::size_t start,
                           std::size_t end, std::string id, double score) {
  return kblink::ScoredCandidate{
      kblink::CandidateRef{kblink::Mention{surface, start, end}, std::move(id),
                           1, kblink::RetrievalChannel::kExact},
      score};
}

// --------------------------------------------------------------------------
// 1. The cumulative-threshold filter agrees with a brute-force reference on
//    10,000 random score lists and finishes within its time budget.
bool criterion1() {
  auto start = Clock::now();
  std::mt19937 rng(20260814);
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t n = rng() % 9;  // lengths 0..8
    std::vector<kblink::ScoredCandidate> input;
    for (std::size_t i = 0; i < n; ++i) {
      double score = 0.05 * static_cast<double>(rng() % 21);
      input.push_back(sc("m", 0, 1, "e" + std::to_string(rng() % 7), score));
    }
    kblink::FilterParams params{0.1 * static_cast<double>(rng() % 11),
                                1 + static_cast<int>(rng() % 5)};

    std::vector<kblink::ScoredCandidate> ref = input;
    std::sort(ref.begin(), ref.end(),
              [](const kblink::ScoredCandidate& a,
                 const kblink::ScoredCandidate& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.candidate.entity_id < b.candidate.entity_id;
              });
    if (static_cast<int>(ref.size()) > params.k) {
      ref.resize(static_cast<std::size_t>(params.k));
    }
    double sum = 0.0;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      sum += ref[i].score;
      if (sum >= params.alpha) {
        keep = i + 1;
        break;
      }
    }
    ref.resize(keep);

    auto got = kblink::statistical_filter(input, params);
    if (got.size() != ref.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].candidate.entity_id != ref[i].candidate.entity_id ||
          got[i].score != ref[i].score) {
        return false;
      }
    }
  }
  return seconds_since(start) < 5.0;
}

// --------------------------------------------------------------------------
// 2. Character-bag similarity agrees with an independent multiset
//    intersection on 1,000 random mixed CJK/ASCII pairs.
bool criterion2() {
  std::mt19937 rng(6021);
  auto random_string = [&rng] {
    std::size_t len = rng() % 21;  // lengths 0..20
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) {
      if (rng() % 2 == 0) {
        s += static_cast<char32_t>(0x4E00 + rng() % 64);  // CJK
      } else {
        s += static_cast<char32_t>('0' + rng() % 75);  // ASCII 0..~z
      }
    }
    return s;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    std::u32string ua = random_string();
    std::u32string ub = random_string();
    // Reference: sorted-sequence intersection size.
    std::u32string sa = ua;
    std::u32string sb = ub;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::u32string common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(common));
    double expected =
        ua.empty() && ub.empty()
            ? 0.0
            : 2.0 * static_cast<double>(common.size()) /
                  static_cast<double>(ua.size() + ub.size());
    double got = kblink::similarity1(kblink::encode_utf8(ua),
                                     kblink::encode_utf8(ub));
    if (std::abs(got - expected) > 1e-12) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 3. The support vector regressor fits a noiseless linear relation with the
//    default hyperparameters, deterministically, within its time budget.
bool criterion3() {
  auto start = Clock::now();
  std::vector<kblink::TrainingExample> data;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    kblink::TrainingExample ex;
    ex.features[0] = uniform(rng);
    ex.label = std::clamp(0.5 * ex.features[0] + 0.2, 0.0, 1.0);
    data.push_back(ex);
  }
  kblink::SvrModel first = kblink::svr_train(data);
  kblink::SvrModel second = kblink::svr_train(data);
  double mse = 0.0;
  for (const kblink::TrainingExample& ex : data) {
    double d = kblink::svr_predict(first, ex.features) - ex.label;
    mse += d * d;
  }
  mse /= static_cast<double>(data.size());
  bool deterministic =
      first.weights == second.weights && first.bias == second.bias;
  return mse < 1e-2 && deterministic && seconds_since(start) < 10.0;
}

// --------------------------------------------------------------------------
// 4. Boosted trees: per-stage training error never increases; a pure
//    two-feature interaction is fit at depth 2 to MSE < 0.05, while the best
//    clamped linear predictor on the same data stays at MSE >= 0.24.
bool criterion4() {
  std::vector<kblink::TrainingExample> data;
  for (int i = 0; i < 200; ++i) {
    kblink::TrainingExample ex;
    double a = static_cast<double>(i % 2);
    double b = static_cast<double>((i / 2) % 2);
    ex.features[1] = a;
    ex.features[3] = b;
    ex.label = a != b ? 1.0 : 0.0;
    data.push_back(ex);
  }
  kblink::MartParams params;
  params.max_depth = 2;
  kblink::MartModel model = kblink::mart_train(data, params);

  for (std::size_t t = 1; t < model.stage_mse.size(); ++t) {
    if (model.stage_mse[t] > model.stage_mse[t - 1] + 1e-12) return false;
  }

  double tree_mse = 0.0;
  for (const kblink::TrainingExample& ex : data) {
    double d = kblink::mart_predict(model, ex.features) - ex.label;
    tree_mse += d * d;
  }
  tree_mse /= static_cast<double>(data.size());
  if (tree_mse >= 0.05) return false;

  // Exhaustive grid over the two active weights and the bias.
  double best_linear = 1e9;
  for (double w1 = -2.0; w1 <= 2.001; w1 += 0.05) {
    for (double w3 = -2.0; w3 <= 2.001; w3 += 0.05) {
      for (double bias = -2.0; bias <= 2.001; bias += 0.05) {
        double mse = 0.0;
        for (const kblink::TrainingExample& ex : data) {
          double pred = std::clamp(
              w1 * ex.features[1] + w3 * ex.features[3] + bias, 0.0, 1.0);
          double d = pred - ex.label;
          mse += d * d;
        }
        best_linear = std::min(best_linear,
                               mse / static_cast<double>(data.size()));
      }
    }
  }
  return best_linear >= 0.24;
}

// --------------------------------------------------------------------------
// 5. End-to-end over the planted corpus: train, link the held-out queries
//    with alpha 0.3 and k 3, and reach recall 1.0 at precision >= 0.8.
bool criterion5() {
  auto start = Clock::now();
  const std::string planted = kFixtures + "/planted";
  fs::path tmp = fs::temp_directory_path() /
                 ("kblink_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  struct Cleanup {
    fs::path path;
    ~Cleanup() { fs::remove_all(path); }
  } cleanup{tmp};

  fs::path model = tmp / "model.bin";
  fs::path links = tmp / "links.tsv";
  fs::path metrics = tmp / "metrics.txt";
  if (!run_cli("train --kb " + planted + "/kb.tsv --embeddings " + planted +
               "/embeddings.txt --labeled " + planted +
               "/train_labeled.tsv --out " + model.string())) {
    return false;
  }
  if (!run_cli("link --kb " + planted + "/kb.tsv --embeddings " + planted +
               "/embeddings.txt --model " + model.string() + " --queries " +
               planted + "/heldout_queries.tsv --alpha 0.3 --k 3 --out " +
               links.string())) {
    return false;
  }
  if (!run_cli("evaluate --gold " + planted + "/heldout_gold.tsv --predicted " +
               links.string() + " --out " + metrics.string())) {
    return false;
  }

  double precision = -1.0;
  double recall = -1.0;
  std::istringstream in(read_file(metrics));
  std::string key;
  double value;
  while (in >> key >> value) {
    if (key == "precision") precision = value;
    if (key == "recall") recall = value;
  }
  return recall == 1.0 && precision >= 0.8 && seconds_since(start) < 30.0;
}

// --------------------------------------------------------------------------
// 6. Feature and score invariants on 10,000 random extractions.
bool criterion6() {
  kblink::KnowledgeBase kb;
  const std::vector<std::string> names{"苹果", "苹果公司", "长江", "galaxy",
                                       "孙悟空", "上海市"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    kblink::Entity& e = kb.obtain("e" + std::to_string(i));
    e.name = names[i];
    e.description = {{"简介", names[(i + 1) % names.size()] + "相关"},
                     {"类别", i % 2 == 0 ? "地点 人物" : "2015 iphone"}};
  }
  kblink::EmbeddingTable table(3);
  table.insert("苹果", {0.6, 0.8, 0.0});
  table.insert("长江", {0.0, 1.0, 0.0});
  table.insert("相", {0.5, 0.0, 0.5});
  table.insert("关", {1.0, 0.0, 0.0});

  // A deliberately rough model: raw scores far outside [0,1] before clamping.
  kblink::SvrModel svr;
  svr.weights.assign(kblink::kFeatureCount, 1.5);
  svr.bias = -1.0;
  kblink::MartModel mart;
  mart.base_score = 0.9;
  kblink::RegressionTree tree;
  tree.nodes.push_back({0, 0.5, 0.0, 1, 2});
  tree.nodes.push_back({-1, 0.0, -3.0, -1, -1});
  tree.nodes.push_back({-1, 0.0, 4.0, -1, -1});
  mart.trees.push_back(tree);

  std::mt19937 rng(31337);
  const std::u32string pool = U"苹果公司长江galaxy2015 孙悟空上海市，·";
  auto random_string = [&](std::size_t min_len, std::size_t max_len) {
    std::size_t len = min_len + rng() % (max_len - min_len + 1);
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) s += pool[rng() % pool.size()];
    return kblink::encode_utf8(s);
  };

  for (int iter = 0; iter < 10000; ++iter) {
    std::string query = random_string(1, 10);
    std::vector<kblink::Mention> mentions;
    std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      std::string surface = random_string(1, 4);
      std::size_t pos = rng() % 8;
      mentions.push_back(
          {surface, pos, pos + kblink::count_chars(surface)});
    }
    const kblink::Entity& entity = kb.entities()[rng() % kb.size()];
    kblink::CandidateRef cand{mentions[rng() % n], entity.id, 1,
                              kblink::RetrievalChannel::kExact};
    kblink::FeatureVector f =
        kblink::extract(query, mentions, cand, entity, table);

    if (f[1] == 1.0 && f[2] != 1.0) return false;  // all-digits => has-digit
    if (f[3] == 1.0 && f[4] != 1.0) return false;  // all-letters => has-letter
    if (f[0] < 0.0 || f[0] > 1.0) return false;
    if (f[7] < -1.0 || f[7] > 1.0) return false;
    double score = kblink::ensemble_score(svr, mart, f);
    if (score < 0.0 || score > 1.0) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 7. The hand-rule examples reproduce and the rule pass is idempotent on
//    1,000 random candidate sets.
bool criterion7() {
  kblink::KnowledgeBase kb;
  auto add = [&kb](const char* id, const char* name, const char* desc) {
    kblink::Entity& e = kb.obtain(id);
    e.name = name;
    e.description = {{"简介", desc}};
  };
  add("e1", "苹果", "蔷薇科水果");
  add("e2", "苹果公司", "消费电子厂商");
  add("e5", "苹果手机", "苹果手机专卖产品");
  add("e9", "苹果乐队", "摇滚乐队");

  // A bare function-word mention loses its candidates.
  auto got = kblink::rule_filter("苹果的传说", {sc("的", 2, 3, "e1", 0.9)}, kb);
  if (!got.empty()) return false;

  // An exact name match outranks the sibling candidate.
  got = kblink::rule_filter(
      "苹果很甜", {sc("苹果", 0, 2, "e1", 0.6), sc("苹果", 0, 2, "e2", 0.9)},
      kb);
  if (got.size() != 1 || got[0].candidate.entity_id != "e1") return false;

  // An entity claimed twice keeps its description-closest mention.
  got = kblink::rule_filter(
      "苹果手机很好",
      {sc("苹果", 0, 2, "e5", 0.9), sc("苹果手机", 0, 4, "e5", 0.8)}, kb);
  if (got.size() != 1 || got[0].candidate.mention.surface != "苹果手机") {
    return false;
  }

  std::mt19937 rng(90210);
  const std::vector<std::string> surfaces{"苹果", "苹果手机", "micro", "soft",
                                          "的", "microsoft"};
  const std::vector<std::string> ids{"e1", "e2", "e5", "e9"};
  const std::string query = "microsoft的苹果手机";
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<kblink::ScoredCandidate> input;
    std::size_t n = rng() % 7;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& surface = surfaces[rng() % surfaces.size()];
      std::size_t pos = rng() % 10;
      input.push_back(sc(surface.c_str(), pos, pos + 1 + rng() % 4,
                         ids[rng() % ids.size()],
                         0.1 * static_cast<double>(rng() % 11)));
    }
    auto once = kblink::rule_filter(query, input, kb);
    auto twice = kblink::rule_filter(query, once, kb);
    if (once.size() != twice.size()) return false;
    for (std::size_t i = 0; i < once.size(); ++i) {
      if (once[i].candidate.mention.start !=
              twice[i].candidate.mention.start ||
          once[i].candidate.mention.end != twice[i].candidate.mention.end ||
          once[i].candidate.entity_id != twice[i].candidate.entity_id) {
        return false;
      }
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// 8. Linking the toy corpus is byte-identical across repeated runs and
//    across thread counts.
bool criterion8() {
  const std::string toy = kFixtures + "/toy";
  fs::path tmp = fs::temp_directory_path() /
                 ("kblink_acceptance8_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  struct Cleanup {
    fs::path path;
    ~Cleanup() { fs::remove_all(path); }
  } cleanup{tmp};

  const std::string base = "link --kb " + toy + "/kb.tsv --embeddings " + toy +
                           "/embeddings.txt --model " + toy +
                           "/model.bin --queries " + toy + "/queries.tsv";
  fs::path first = tmp / "run1.tsv";
  fs::path second = tmp / "run2.tsv";
  fs::path pooled = tmp / "run4.tsv";
  if (!run_cli(base + " --out " + first.string())) return false;
  if (!run_cli(base + " --out " + second.string())) return false;
  if (!run_cli(base + " --threads 4 --out " + pooled.string())) return false;

  std::string bytes = read_file(first);
  return !bytes.empty() && bytes == read_file(second) &&
         bytes == read_file(pooled);
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    bool (*check)();
  };
  const Criterion criteria[] = {
      {1, "cumulative-threshold filter matches the brute-force oracle",
       criterion1},
      {2, "character-bag similarity matches the multiset reference",
       criterion2},
      {3, "SVR fits a linear relation deterministically", criterion3},
      {4, "boosted trees are stage-monotone and capture the interaction a "
          "linear model cannot",
       criterion4},
      {5, "planted corpus trains and links at recall 1.0, precision >= 0.8",
       criterion5},
      {6, "feature and ensemble-score invariants hold under fuzzing",
       criterion6},
      {7, "hand-rule examples reproduce and the pass is idempotent",
       criterion7},
      {8, "toy-corpus linking is byte-identical across runs and threads",
       criterion8},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    try {
      ok = c.check();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "criterion %d threw: %s\n", c.number, e.what());
    }
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", c.number,
                c.name);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
