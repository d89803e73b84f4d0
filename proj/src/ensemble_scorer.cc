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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>

#include "kblink/candidate_gen.h"
#include "kblink/error.h"
#include "kblink/segmenter.h"
#include "text_io.h"

namespace kblink {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double dot(const std::vector<double>& w, const FeatureVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) s += w[i] * x[i];
  return s;
}

double svr_objective(const std::vector<TrainingExample>& data,
                     const std::vector<double>& w, double b, double c,
                     double epsilon) {
  double loss = 0.0;
  for (const TrainingExample& ex : data) {
    double r = std::abs(ex.label - (dot(w, ex.features) + b)) - epsilon;
    if (r > 0.0) loss += r;
  }
  double reg = 0.0;
  for (double wi : w) reg += wi * wi;
  return c * loss + 0.5 * reg;
}

}  // namespace

SvrModel svr_train(const std::vector<TrainingExample>& data,
                   const SvrParams& params) {
  if (data.empty()) {
    throw Error(ErrorKind::kEmptyTrainingSet, "no examples to fit");
  }
  const double n = static_cast<double>(data.size());

  SvrModel model;
  model.params = params;
  std::mt19937_64 rng(static_cast<std::uint64_t>(params.seed));
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  std::vector<double> w(kFeatureCount);
  for (double& wi : w) wi = init(rng);
  double b = 0.0;

  std::vector<double> best_w = w;
  double best_b = b;
  double best_obj = svr_objective(data, w, b, params.c, params.epsilon);
  int stall = 0;

  const double base_rate = 0.2;
  const double decay = 0.01;
  std::vector<double> grad(kFeatureCount);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) grad[i] = w[i];
    double grad_b = 0.0;
    for (const TrainingExample& ex : data) {
      double r = ex.label - (dot(w, ex.features) + b);
      if (std::abs(r) <= params.epsilon) continue;
      double sign = r > 0.0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        grad[i] -= params.c * sign * ex.features[i];
      }
      grad_b -= params.c * sign;
    }
    // Step scaled by 1/n so the schedule is dataset-size independent, and by
    // 1/C for C > 1 so the loss term (whose subgradient grows with C) cannot
    // make the updates overshoot.
    double rate =
        base_rate / ((1.0 + decay * epoch) * n * std::max(1.0, params.c));
    for (std::size_t i = 0; i < kFeatureCount; ++i) w[i] -= rate * grad[i];
    b -= rate * grad_b;

    double obj = svr_objective(data, w, b, params.c, params.epsilon);
    if (obj < best_obj - 1e-6) {
      best_obj = obj;
      best_w = w;
      best_b = b;
      stall = 0;
    } else {
      if (obj < best_obj) {
        best_obj = obj;
        best_w = w;
        best_b = b;
      }
      if (++stall >= 10) break;  // objective has flattened out
    }
  }

  model.weights = std::move(best_w);
  model.bias = best_b;
  return model;
}

double svr_predict(const SvrModel& model, const FeatureVector& x) {
  return clamp01(dot(model.weights, x) + model.bias);
}

double RegressionTree::predict(const FeatureVector& x) const {
  std::int32_t node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
    node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                   : nd.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

// Greedy least-squares tree construction. Splits maximize the variance
// reduction sum(l)^2/nl + sum(r)^2/nr - sum^2/n; zero-gain splits are taken
// when nothing better exists, so a pure-interaction pattern still partitions
// and the children can realize the gain.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<TrainingExample>& data,
              const std::vector<double>& residuals, const MartParams& params)
      : data_(data), residuals_(residuals), params_(params) {}

  RegressionTree build() {
    std::vector<std::int32_t> idx(data_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx[i] = static_cast<std::int32_t>(i);
    }
    RegressionTree tree;
    grow(tree.nodes, idx, 0);
    return tree;
  }

 private:
  std::int32_t grow(std::vector<TreeNode>& nodes,
                    std::vector<std::int32_t>& idx, int depth) {
    const auto self = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();

    double sum = 0.0;
    double lo = residuals_[static_cast<std::size_t>(idx.front())];
    double hi = lo;
    for (std::int32_t i : idx) {
      double r = residuals_[static_cast<std::size_t>(i)];
      sum += r;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const auto n = static_cast<double>(idx.size());
    const double mean = sum / n;

    bool splittable = depth < params_.max_depth &&
                      static_cast<int>(idx.size()) >= 2 * params_.min_leaf &&
                      lo != hi;
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = -std::numeric_limits<double>::infinity();
    if (splittable) {
      std::vector<std::pair<double, std::int32_t>> order(idx.size());
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
          order[i] = {data_[static_cast<std::size_t>(idx[i])].features[f],
                      idx[i]};
        }
        std::sort(order.begin(), order.end());
        double left_sum = 0.0;
        for (std::size_t p = 0; p + 1 < order.size(); ++p) {
          left_sum += residuals_[static_cast<std::size_t>(order[p].second)];
          if (order[p].first == order[p + 1].first) continue;
          const auto nl = static_cast<double>(p + 1);
          const double nr = n - nl;
          if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
          double right_sum = sum - left_sum;
          double gain = left_sum * left_sum / nl +
                        right_sum * right_sum / nr - sum * sum / n;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = static_cast<std::int32_t>(f);
            best_threshold = order[p].first;
          }
        }
      }
    }

    if (best_feature < 0) {
      nodes[static_cast<std::size_t>(self)].value = mean;
      return self;
    }

    std::vector<std::int32_t> left;
    std::vector<std::int32_t> right;
    for (std::int32_t i : idx) {
      const double v = data_[static_cast<std::size_t>(i)]
                           .features[static_cast<std::size_t>(best_feature)];
      (v <= best_threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    nodes[static_cast<std::size_t>(self)].feature = best_feature;
    nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
    std::int32_t l = grow(nodes, left, depth + 1);
    std::int32_t r = grow(nodes, right, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }

  const std::vector<TrainingExample>& data_;
  const std::vector<double>& residuals_;
  const MartParams& params_;
};

}  // namespace

MartModel mart_train(const std::vector<TrainingExample>& data,
                     const MartParams& params) {
  if (data.empty()) {
    throw Error(ErrorKind::kEmptyTrainingSet, "no examples to fit");
  }
  MartModel model;
  model.params = params;
  model.learning_rate = params.learning_rate;

  double sum = 0.0;
  for (const TrainingExample& ex : data) sum += ex.label;
  model.base_score = sum / static_cast<double>(data.size());

  std::vector<double> residuals(data.size());
  double mse = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    residuals[i] = data[i].label - model.base_score;
    mse += residuals[i] * residuals[i];
  }
  mse /= static_cast<double>(data.size());

  model.trees.reserve(static_cast<std::size_t>(params.num_trees));
  for (int t = 0; t < params.num_trees; ++t) {
    RegressionTree tree = TreeBuilder(data, residuals, params).build();
    double next_mse = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      residuals[i] -= params.learning_rate * tree.predict(data[i].features);
      next_mse += residuals[i] * residuals[i];
    }
    next_mse /= static_cast<double>(data.size());
    // Mean-valued leaves can only shrink the residual sum of squares.
    if (next_mse > mse + 1e-12) {
      throw Error(ErrorKind::kNonFiniteValue,
                  "training error increased at stage " + std::to_string(t));
    }
    mse = next_mse;
    model.trees.push_back(std::move(tree));
    model.stage_mse.push_back(mse);
  }
  return model;
}

double mart_predict(const MartModel& model, const FeatureVector& x) {
  double raw = model.base_score;
  for (const RegressionTree& tree : model.trees) {
    raw += model.learning_rate * tree.predict(x);
  }
  return clamp01(raw);
}

double ensemble_score(const SvrModel& svr, const MartModel& mart,
                      const FeatureVector& x) {
  return (svr_predict(svr, x) + mart_predict(mart, x)) / 2.0;
}

// ---------------------------------------------------------------------------
// Serialization. All integers and IEEE-754 doubles are little-endian.

namespace {

constexpr char kMagic[4] = {'K', 'B', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxNodes = 1u << 24;  // corrupt-count guard

void put_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

void put_i32(std::ostream& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_i64(std::ostream& out, std::int64_t v) {
  put_u64(out, static_cast<std::uint64_t>(v));
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

[[noreturn]] void corrupt(const std::string& source, const char* what) {
  throw Error(ErrorKind::kCorruptModel, std::string(what) + ": " + source);
}

std::uint32_t get_u32(std::istream& in, const std::string& source) {
  char buf[4];
  if (!in.read(buf, 4)) corrupt(source, "truncated model file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& source) {
  char buf[8];
  if (!in.read(buf, 8)) corrupt(source, "truncated model file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  }
  return v;
}

std::int32_t get_i32(std::istream& in, const std::string& source) {
  return static_cast<std::int32_t>(get_u32(in, source));
}

std::int64_t get_i64(std::istream& in, const std::string& source) {
  return static_cast<std::int64_t>(get_u64(in, source));
}

double get_f64(std::istream& in, const std::string& source) {
  return std::bit_cast<double>(get_u64(in, source));
}

}  // namespace

void save_model(const ModelBundle& bundle, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kFeatureCount));

  for (double w : bundle.svr.weights) put_f64(out, w);
  put_f64(out, bundle.svr.bias);
  put_f64(out, bundle.svr.params.c);
  put_f64(out, bundle.svr.params.epsilon);
  put_u32(out, static_cast<std::uint32_t>(bundle.svr.params.epochs));
  put_i64(out, bundle.svr.params.seed);

  put_f64(out, bundle.mart.base_score);
  put_f64(out, bundle.mart.learning_rate);
  put_u32(out, static_cast<std::uint32_t>(bundle.mart.params.num_trees));
  put_u32(out, static_cast<std::uint32_t>(bundle.mart.params.max_depth));
  put_u32(out, static_cast<std::uint32_t>(bundle.mart.params.min_leaf));
  put_i64(out, bundle.mart.params.seed);
  put_u32(out, static_cast<std::uint32_t>(bundle.mart.trees.size()));
  for (const RegressionTree& tree : bundle.mart.trees) {
    put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const TreeNode& node : tree.nodes) {
      put_i32(out, node.feature);
      put_f64(out, node.threshold);
      put_f64(out, node.value);
      put_i32(out, node.left);
      put_i32(out, node.right);
    }
  }
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kIoError, "cannot open file for writing: " + path);
  }
  save_model(bundle, out);
  out.flush();
  if (!out) throw Error(ErrorKind::kIoError, "cannot write model: " + path);
}

ModelBundle load_model(std::istream& in, const std::string& source) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    corrupt(source, "not a model file");
  }
  std::uint32_t version = get_u32(in, source);
  if (version != kVersion) {
    throw Error(ErrorKind::kVersionMismatch,
                "model format version " + std::to_string(version) +
                    ", expected " + std::to_string(kVersion) + ": " + source);
  }
  if (get_u32(in, source) != kFeatureCount) {
    corrupt(source, "unexpected feature count");
  }

  ModelBundle bundle;
  for (double& w : bundle.svr.weights) w = get_f64(in, source);
  bundle.svr.bias = get_f64(in, source);
  bundle.svr.params.c = get_f64(in, source);
  bundle.svr.params.epsilon = get_f64(in, source);
  bundle.svr.params.epochs = static_cast<int>(get_u32(in, source));
  bundle.svr.params.seed = get_i64(in, source);

  bundle.mart.base_score = get_f64(in, source);
  bundle.mart.learning_rate = get_f64(in, source);
  bundle.mart.params.num_trees = static_cast<int>(get_u32(in, source));
  bundle.mart.params.max_depth = static_cast<int>(get_u32(in, source));
  bundle.mart.params.min_leaf = static_cast<int>(get_u32(in, source));
  bundle.mart.params.seed = get_i64(in, source);
  bundle.mart.params.learning_rate = bundle.mart.learning_rate;

  std::uint32_t tree_count = get_u32(in, source);
  if (tree_count > kMaxNodes) corrupt(source, "implausible tree count");
  bundle.mart.trees.resize(tree_count);
  for (RegressionTree& tree : bundle.mart.trees) {
    std::uint32_t node_count = get_u32(in, source);
    if (node_count == 0 || node_count > kMaxNodes) {
      corrupt(source, "implausible node count");
    }
    tree.nodes.resize(node_count);
    for (TreeNode& node : tree.nodes) {
      node.feature = get_i32(in, source);
      node.threshold = get_f64(in, source);
      node.value = get_f64(in, source);
      node.left = get_i32(in, source);
      node.right = get_i32(in, source);
      if (node.feature >= static_cast<std::int32_t>(kFeatureCount)) {
        corrupt(source, "split feature out of range");
      }
      if (node.feature >= 0) {
        auto limit = static_cast<std::int32_t>(node_count);
        if (node.left < 0 || node.left >= limit || node.right < 0 ||
            node.right >= limit) {
          corrupt(source, "child index out of range");
        }
      }
    }
  }
  in.peek();
  if (!in.eof()) corrupt(source, "trailing bytes after model");
  return bundle;
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open file: " + path);
  return load_model(in, path);
}

// ---------------------------------------------------------------------------

std::vector<TrainingExample> build_training_set(
    const std::vector<LabeledQuery>& labeled, const TrainingContext& context,
    CoverageReport* report) {
  std::vector<TrainingExample> examples;
  CoverageReport coverage;
  for (const LabeledQuery& lq : labeled) {
    std::vector<Mention> mentions = segment(lq.query, *context.dict);
    std::vector<CandidateRef> candidates =
        gather(mentions, *context.dict, *context.index, context.retrieval);
    std::set<std::string> gold(lq.gold_ids.begin(), lq.gold_ids.end());
    std::unordered_set<std::string> seen;
    for (const CandidateRef& ref : candidates) {
      const Entity* entity = context.kb->find(ref.entity_id);
      if (entity == nullptr) continue;
      TrainingExample ex;
      ex.features = extract(lq.query, mentions, ref, *entity, *context.table,
                            context.dict, context.mode);
      ex.label = gold.count(ref.entity_id) != 0 ? 1.0 : 0.0;
      ex.query_id = lq.query_id;
      ex.entity_id = ref.entity_id;
      ++(ex.label == 1.0 ? coverage.positives : coverage.negatives);
      examples.push_back(std::move(ex));
      seen.insert(ref.entity_id);
    }
    for (const std::string& id : gold) {
      ++coverage.gold_total;
      if (seen.count(id) != 0) {
        ++coverage.gold_matched;
      } else {
        coverage.misses.emplace_back(lq.query_id, id);
      }
    }
  }
  if (report != nullptr) *report = std::move(coverage);
  return examples;
}

}  // namespace kblink
