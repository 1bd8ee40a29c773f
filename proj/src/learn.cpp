#include "minijudge/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace minijudge {

namespace {

using nlohmann::json;

void validate_config(const ModelConfig& config) {
  switch (config.family) {
    case ModelConfig::Family::Knn:
      if (config.knn.k < 1) throw std::invalid_argument("k must be at least 1");
      break;
    case ModelConfig::Family::Tree:
      if (config.tree.search_trials < 1)
        throw std::invalid_argument("search_trials must be at least 1");
      break;
    case ModelConfig::Family::Gbt:
      if (config.gbt.max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
      if (config.gbt.n_estimators < 1)
        throw std::invalid_argument("n_estimators must be at least 1");
      if (config.gbt.learning_rate <= 0.0 || config.gbt.learning_rate > 1.0)
        throw std::invalid_argument("learning_rate must be in (0, 1]");
      break;
  }
}

int check_dimensions(const std::vector<LabeledSample>& data) {
  if (data.empty()) throw InsufficientData("no training samples");
  int dim = static_cast<int>(data[0].features.size());
  for (const auto& s : data)
    if (static_cast<int>(s.features.size()) != dim)
      throw DimensionMismatch("training samples have mixed feature lengths");
  return dim;
}

void require_both_classes(const std::vector<LabeledSample>& data) {
  bool correct = false, incorrect = false;
  for (const auto& s : data) (s.label == Label::Correct ? correct : incorrect) = true;
  if (!correct || !incorrect) throw InsufficientData("need at least one sample of each class");
}

int hamming(const FeatureVector& a, const FeatureVector& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double clamp_prob(double p) { return std::min(1.0 - 1e-12, std::max(1e-12, p)); }

// ---------------------------------------------------------------------------
// Classification tree (Gini), binary features
// ---------------------------------------------------------------------------

struct ClassTreeBuilder {
  const std::vector<LabeledSample>& data;
  int dim;
  int max_depth;
  int min_leaf;
  std::vector<TreeNode> nodes;

  double gini(int n, int correct) const {
    if (n == 0) return 0.0;
    double pc = static_cast<double>(correct) / n;
    return 1.0 - pc * pc - (1.0 - pc) * (1.0 - pc);
  }

  int build(const std::vector<int>& idxs, int depth) {
    int n = static_cast<int>(idxs.size());
    int n_correct = 0;
    for (int i : idxs) n_correct += data[static_cast<std::size_t>(i)].label == Label::Correct;
    int node_id = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[static_cast<std::size_t>(node_id)].value = static_cast<double>(n_correct) / n;
    if (depth >= max_depth || n_correct == 0 || n_correct == n) return node_id;

    double parent = gini(n, n_correct);
    int best_feature = -1;
    double best_gain = 1e-12;
    for (int f = 0; f < dim; ++f) {
      int n_right = 0, c_right = 0;
      for (int i : idxs) {
        const auto& s = data[static_cast<std::size_t>(i)];
        if (s.features[static_cast<std::size_t>(f)]) {
          ++n_right;
          c_right += s.label == Label::Correct;
        }
      }
      int n_left = n - n_right;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      int c_left = n_correct - c_right;
      double weighted = (static_cast<double>(n_left) / n) * gini(n_left, c_left) +
                        (static_cast<double>(n_right) / n) * gini(n_right, c_right);
      double gain = parent - weighted;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<int> left, right;
    for (int i : idxs)
      (data[static_cast<std::size_t>(i)].features[static_cast<std::size_t>(best_feature)] ? right
                                                                                          : left)
          .push_back(i);
    nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
    int l = build(left, depth + 1);
    nodes[static_cast<std::size_t>(node_id)].left = l;
    int r = build(right, depth + 1);
    nodes[static_cast<std::size_t>(node_id)].right = r;
    return node_id;
  }
};

std::vector<TreeNode> fit_class_tree(const std::vector<LabeledSample>& data,
                                     const std::vector<int>& idxs, int dim, int max_depth,
                                     int min_leaf) {
  ClassTreeBuilder builder{data, dim, max_depth, min_leaf, {}};
  builder.build(idxs, 0);
  return builder.nodes;
}

double tree_value(const std::vector<TreeNode>& nodes, const FeatureVector& features) {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(at)];
    at = features[static_cast<std::size_t>(node.feature)] ? node.right : node.left;
  }
  return nodes[static_cast<std::size_t>(at)].value;
}

// ---------------------------------------------------------------------------
// Regression tree on boosting residuals, Newton leaf values
// ---------------------------------------------------------------------------

struct RegTreeBuilder {
  const std::vector<LabeledSample>& data;
  const std::vector<double>& residual;
  const std::vector<double>& hessian;
  int dim;
  int max_depth;
  std::vector<TreeNode> nodes;

  int build(const std::vector<int>& idxs, int depth) {
    int n = static_cast<int>(idxs.size());
    double sum_r = 0, sum_h = 0;
    for (int i : idxs) {
      sum_r += residual[static_cast<std::size_t>(i)];
      sum_h += hessian[static_cast<std::size_t>(i)];
    }
    int node_id = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[static_cast<std::size_t>(node_id)].value = sum_r / std::max(sum_h, 1e-12);
    if (depth >= max_depth || n < 2) return node_id;

    int best_feature = -1;
    double best_gain = 1e-12;
    double parent_score = sum_r * sum_r / n;
    for (int f = 0; f < dim; ++f) {
      double sr = 0;
      int nr = 0;
      for (int i : idxs) {
        if (data[static_cast<std::size_t>(i)].features[static_cast<std::size_t>(f)]) {
          sr += residual[static_cast<std::size_t>(i)];
          ++nr;
        }
      }
      int nl = n - nr;
      if (nl == 0 || nr == 0) continue;
      double sl = sum_r - sr;
      double gain = sl * sl / nl + sr * sr / nr - parent_score;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<int> left, right;
    for (int i : idxs)
      (data[static_cast<std::size_t>(i)].features[static_cast<std::size_t>(best_feature)] ? right
                                                                                          : left)
          .push_back(i);
    nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
    int l = build(left, depth + 1);
    nodes[static_cast<std::size_t>(node_id)].left = l;
    int r = build(right, depth + 1);
    nodes[static_cast<std::size_t>(node_id)].right = r;
    return node_id;
  }
};

double logistic_loss(const std::vector<LabeledSample>& data, const std::vector<double>& scores) {
  double total = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double p = clamp_prob(sigmoid(scores[i]));
    total += data[i].label == Label::Correct ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(data.size());
}

void scale_leaves(std::vector<TreeNode>& nodes, double factor) {
  for (auto& node : nodes)
    if (node.feature < 0) node.value *= factor;
}

// ---------------------------------------------------------------------------
// Family trainers
// ---------------------------------------------------------------------------

}  // namespace

Model Model::fit_knn(const KnnConfig& config, const std::vector<LabeledSample>& data, int dim) {
  if (static_cast<int>(data.size()) < config.k)
    throw InsufficientData("k-NN needs at least k samples, got " + std::to_string(data.size()));
  Model model;
  model.family_ = ModelConfig::Family::Knn;
  model.dim_ = dim;
  model.k_ = config.k;
  model.samples_ = data;
  return model;
}

Model Model::fit_tree(const TreeConfig& config, const std::vector<LabeledSample>& data,
                      int dim, RandomSource& rng) {
  require_both_classes(data);
  int n = static_cast<int>(data.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  int val_n = std::max(1, n / 5);
  std::vector<int> val(order.begin(), order.begin() + val_n);
  std::vector<int> train(order.begin() + val_n, order.end());
  if (train.empty()) train = val;

  int best_depth = 0, best_leaf = 0;
  double best_acc = -1.0;
  for (int trial = 0; trial < config.search_trials; ++trial) {
    int depth = 2 + static_cast<int>(rng.below(15));
    int leaf = 1 + static_cast<int>(rng.below(8));
    auto nodes = fit_class_tree(data, train, dim, depth, leaf);
    int hits = 0;
    for (int i : val) {
      bool predicted = tree_value(nodes, data[static_cast<std::size_t>(i)].features) >= 0.5;
      hits += predicted == (data[static_cast<std::size_t>(i)].label == Label::Correct);
    }
    double acc = static_cast<double>(hits) / static_cast<double>(val.size());
    if (acc > best_acc) {
      best_acc = acc;
      best_depth = depth;
      best_leaf = leaf;
    }
  }

  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  Model model;
  model.family_ = ModelConfig::Family::Tree;
  model.dim_ = dim;
  model.nodes_ = fit_class_tree(data, all, dim, best_depth, best_leaf);
  return model;
}

Model Model::fit_gbt(const GbtConfig& config, const std::vector<LabeledSample>& data,
                     int dim) {
  require_both_classes(data);
  int n = static_cast<int>(data.size());
  int positives = 0;
  for (const auto& s : data) positives += s.label == Label::Correct;

  Model model;
  model.family_ = ModelConfig::Family::Gbt;
  model.dim_ = dim;
  model.learning_rate_ = config.learning_rate;
  model.base_score_ = std::log(static_cast<double>(positives) /
                               static_cast<double>(n - positives));

  std::vector<double> scores(static_cast<std::size_t>(n), model.base_score_);
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  double loss = logistic_loss(data, scores);
  model.loss_trace_.push_back(loss);

  for (int round = 0; round < config.n_estimators; ++round) {
    std::vector<double> residual(static_cast<std::size_t>(n));
    std::vector<double> hess(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto u = static_cast<std::size_t>(i);
      double p = sigmoid(scores[u]);
      residual[u] = (data[u].label == Label::Correct ? 1.0 : 0.0) - p;
      hess[u] = std::max(p * (1.0 - p), 1e-12);
    }
    RegTreeBuilder builder{data, residual, hess, dim, config.max_depth, {}};
    builder.build(all, 0);
    auto nodes = std::move(builder.nodes);

    // A Newton step can overshoot on tiny leaves; halve it until the training
    // loss stops getting worse, dropping the round entirely as a last resort.
    double new_loss = loss;
    std::vector<double> new_scores;
    bool accepted = false;
    for (int halving = 0; halving <= 10; ++halving) {
      new_scores = scores;
      for (int i = 0; i < n; ++i)
        new_scores[static_cast<std::size_t>(i)] +=
            config.learning_rate * tree_value(nodes, data[static_cast<std::size_t>(i)].features);
      new_loss = logistic_loss(data, new_scores);
      if (new_loss <= loss) {
        accepted = true;
        break;
      }
      scale_leaves(nodes, 0.5);
    }
    if (accepted) {
      model.trees_.push_back(std::move(nodes));
      scores = std::move(new_scores);
      loss = new_loss;
    }
    model.loss_trace_.push_back(loss);
  }
  return model;
}

Model train_model(const ModelConfig& config, const std::vector<LabeledSample>& data,
                  std::uint64_t rng_seed) {
  validate_config(config);
  int dim = check_dimensions(data);
  RandomSource rng(rng_seed);
  switch (config.family) {
    case ModelConfig::Family::Knn: return Model::fit_knn(config.knn, data, dim);
    case ModelConfig::Family::Tree: return Model::fit_tree(config.tree, data, dim, rng);
    case ModelConfig::Family::Gbt: return Model::fit_gbt(config.gbt, data, dim);
  }
  throw std::logic_error("unreachable");
}

double Model::predict_probability(const FeatureVector& features) const {
  if (static_cast<int>(features.size()) != dim_)
    throw DimensionMismatch("feature vector length " + std::to_string(features.size()) +
                            " does not match model dimension " + std::to_string(dim_));
  switch (family_) {
    case ModelConfig::Family::Knn: {
      std::vector<std::pair<int, int>> by_distance;  // (distance, sample index)
      by_distance.reserve(samples_.size());
      for (std::size_t i = 0; i < samples_.size(); ++i)
        by_distance.emplace_back(hamming(features, samples_[i].features), static_cast<int>(i));
      std::sort(by_distance.begin(), by_distance.end());
      int correct = 0;
      for (int i = 0; i < k_; ++i)
        correct += samples_[static_cast<std::size_t>(by_distance[static_cast<std::size_t>(i)]
                                                         .second)]
                       .label == Label::Correct;
      return static_cast<double>(correct) / k_;
    }
    case ModelConfig::Family::Tree: return tree_value(nodes_, features);
    case ModelConfig::Family::Gbt: {
      double score = base_score_;
      for (const auto& tree : trees_) score += learning_rate_ * tree_value(tree, features);
      return sigmoid(score);
    }
  }
  throw std::logic_error("unreachable");
}

double predict_probability(const Model& model, const FeatureVector& features) {
  return model.predict_probability(features);
}

ThresholdResult select_threshold(const std::vector<double>& correct_probs,
                                 const std::vector<double>& incorrect_probs, double max_fpr) {
  ThresholdResult result;
  if (incorrect_probs.empty()) {
    result.degenerate = true;
    return result;
  }
  std::vector<double> candidates;
  candidates.push_back(0.0);
  candidates.insert(candidates.end(), correct_probs.begin(), correct_probs.end());
  candidates.insert(candidates.end(), incorrect_probs.begin(), incorrect_probs.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.push_back(kThreshAboveAll);
  for (double t : candidates) {
    int above = 0;
    for (double p : incorrect_probs) above += p >= t;
    double fpr = static_cast<double>(above) / static_cast<double>(incorrect_probs.size());
    if (fpr < max_fpr) {
      result.thresh = t;
      result.achieved_fpr = fpr;
      return result;
    }
  }
  return result;  // nothing qualified, stay above all probabilities
}

CalibratedModel train_and_get_thresh(const ModelConfig& config, double max_fpr,
                                     const std::vector<LabeledSample>& correct,
                                     const std::vector<LabeledSample>& incorrect,
                                     std::uint64_t rng_seed) {
  if (correct.empty() || incorrect.empty())
    throw InsufficientData("calibration needs both correct and incorrect samples");
  RandomSource rng(rng_seed);

  auto split = [&rng](const std::vector<LabeledSample>& samples, Label label,
                      std::vector<LabeledSample>& train, std::vector<LabeledSample>& val) {
    std::vector<int> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t val_n = samples.size() >= 2 ? std::max<std::size_t>(1, samples.size() / 5) : 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      LabeledSample s = samples[static_cast<std::size_t>(order[i])];
      s.label = label;
      (i < val_n ? val : train).push_back(std::move(s));
    }
  };

  std::vector<LabeledSample> train, val_correct, val_incorrect;
  split(correct, Label::Correct, train, val_correct);
  split(incorrect, Label::Incorrect, train, val_incorrect);

  CalibratedModel calibrated;
  calibrated.model = train_model(config, train, rng.next_u64());

  std::vector<double> correct_probs, incorrect_probs;
  for (const auto& s : val_correct)
    correct_probs.push_back(calibrated.model.predict_probability(s.features));
  for (const auto& s : val_incorrect)
    incorrect_probs.push_back(calibrated.model.predict_probability(s.features));

  ThresholdResult chosen = select_threshold(correct_probs, incorrect_probs, max_fpr);
  calibrated.thresh = chosen.thresh;
  calibrated.calibration_fpr = chosen.achieved_fpr;
  calibrated.degenerate_validation = chosen.degenerate;
  return calibrated;
}

// ---------------------------------------------------------------------------
// JSON artifacts
// ---------------------------------------------------------------------------

namespace {

json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json arr = json::array();
  for (const auto& node : nodes)
    arr.push_back({{"feature", node.feature},
                   {"left", node.left},
                   {"right", node.right},
                   {"value", node.value}});
  return arr;
}

std::vector<TreeNode> nodes_from_json(const json& arr) {
  std::vector<TreeNode> nodes;
  for (const auto& item : arr)
    nodes.push_back({item.at("feature").get<int>(), item.at("left").get<int>(),
                     item.at("right").get<int>(), item.at("value").get<double>()});
  return nodes;
}

}  // namespace

std::string save_model_json(const Model& model) {
  json j;
  j["schema_version"] = 1;
  j["dim"] = model.dim_;
  switch (model.family_) {
    case ModelConfig::Family::Knn: {
      j["family"] = "knn";
      j["k"] = model.k_;
      json samples = json::array();
      for (const auto& s : model.samples_) {
        json f = json::array();
        for (auto bit : s.features) f.push_back(static_cast<int>(bit));
        samples.push_back({{"features", f}, {"label", s.label == Label::Correct ? 1 : 0}});
      }
      j["samples"] = samples;
      break;
    }
    case ModelConfig::Family::Tree:
      j["family"] = "tree";
      j["nodes"] = nodes_to_json(model.nodes_);
      break;
    case ModelConfig::Family::Gbt: {
      j["family"] = "gbt";
      j["base_score"] = model.base_score_;
      j["learning_rate"] = model.learning_rate_;
      json trees = json::array();
      for (const auto& tree : model.trees_) trees.push_back(nodes_to_json(tree));
      j["trees"] = trees;
      j["loss_trace"] = model.loss_trace_;
      break;
    }
  }
  return j.dump();
}

Model load_model_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::runtime_error("unsupported model artifact version");
  Model model;
  model.dim_ = j.at("dim").get<int>();
  std::string family = j.at("family").get<std::string>();
  if (family == "knn") {
    model.family_ = ModelConfig::Family::Knn;
    model.k_ = j.at("k").get<int>();
    for (const auto& item : j.at("samples")) {
      LabeledSample s;
      for (const auto& bit : item.at("features"))
        s.features.push_back(static_cast<std::uint8_t>(bit.get<int>()));
      s.label = item.at("label").get<int>() ? Label::Correct : Label::Incorrect;
      model.samples_.push_back(std::move(s));
    }
  } else if (family == "tree") {
    model.family_ = ModelConfig::Family::Tree;
    model.nodes_ = nodes_from_json(j.at("nodes"));
  } else if (family == "gbt") {
    model.family_ = ModelConfig::Family::Gbt;
    model.base_score_ = j.at("base_score").get<double>();
    model.learning_rate_ = j.at("learning_rate").get<double>();
    for (const auto& tree : j.at("trees")) model.trees_.push_back(nodes_from_json(tree));
    model.loss_trace_ = j.at("loss_trace").get<std::vector<double>>();
  } else {
    throw std::runtime_error("unknown model family '" + family + "'");
  }
  return model;
}

std::string save_calibrated_model(const CalibratedModel& model) {
  json j;
  j["schema_version"] = 1;
  j["thresh"] = model.thresh;
  j["calibration_fpr"] = model.calibration_fpr;
  j["degenerate_validation"] = model.degenerate_validation;
  j["model"] = json::parse(save_model_json(model.model));
  return j.dump();
}

CalibratedModel load_calibrated_model(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::runtime_error("unsupported model artifact version");
  CalibratedModel model;
  model.thresh = j.at("thresh").get<double>();
  model.calibration_fpr = j.at("calibration_fpr").get<double>();
  model.degenerate_validation = j.at("degenerate_validation").get<bool>();
  model.model = load_model_json(j.at("model").dump());
  return model;
}

}  // namespace minijudge
