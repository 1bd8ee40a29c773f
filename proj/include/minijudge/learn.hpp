#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "minijudge/features.hpp"
#include "minijudge/util.hpp"

namespace minijudge {

enum class Label : std::uint8_t { Incorrect = 0, Correct = 1 };

struct LabeledSample {
  FeatureVector features;
  Label label = Label::Incorrect;
};

struct KnnConfig {
  int k = 6;
};
struct TreeConfig {
  int search_trials = 10;
};
struct GbtConfig {
  int max_depth = 7;
  int n_estimators = 100;
  double learning_rate = 0.1;
};

struct ModelConfig {
  enum class Family { Knn, Tree, Gbt };
  Family family = Family::Gbt;
  KnnConfig knn;
  TreeConfig tree;
  GbtConfig gbt;

  static ModelConfig make_knn(int k) {
    ModelConfig c;
    c.family = Family::Knn;
    c.knn.k = k;
    return c;
  }
  static ModelConfig make_tree(int search_trials) {
    ModelConfig c;
    c.family = Family::Tree;
    c.tree.search_trials = search_trials;
    return c;
  }
  static ModelConfig make_gbt(int max_depth, int n_estimators, double learning_rate = 0.1) {
    ModelConfig c;
    c.family = Family::Gbt;
    c.gbt = {max_depth, n_estimators, learning_rate};
    return c;
  }
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared flat tree node; feature == -1 marks a leaf carrying value.
struct TreeNode {
  int feature = -1;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

class Model {
 public:
  double predict_probability(const FeatureVector& features) const;
  ModelConfig::Family family() const { return family_; }
  int dim() const { return dim_; }
  // Training logistic loss before boosting and after each round; non-empty
  // only for Gbt. Non-increasing by construction.
  const std::vector<double>& training_loss_trace() const { return loss_trace_; }

 private:
  friend Model train_model(const ModelConfig&, const std::vector<LabeledSample>&, std::uint64_t);
  friend std::string save_model_json(const Model&);
  friend Model load_model_json(const std::string&);

  static Model fit_knn(const KnnConfig& config, const std::vector<LabeledSample>& data, int dim);
  static Model fit_tree(const TreeConfig& config, const std::vector<LabeledSample>& data, int dim,
                        RandomSource& rng);
  static Model fit_gbt(const GbtConfig& config, const std::vector<LabeledSample>& data, int dim);

  ModelConfig::Family family_ = ModelConfig::Family::Knn;
  int dim_ = 0;
  // Knn
  int k_ = 0;
  std::vector<LabeledSample> samples_;
  // Tree
  std::vector<TreeNode> nodes_;
  // Gbt
  double base_score_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<std::vector<TreeNode>> trees_;
  std::vector<double> loss_trace_;
};

// Knn memorizes the data; Tree random-searches (max_depth in [2,16],
// min_samples_leaf in [1,8]) keeping the best internal-validation accuracy;
// Gbt fits depth-capped regression trees on logistic-loss gradients with
// Newton leaf values. Deterministic given rng_seed.
Model train_model(const ModelConfig& config, const std::vector<LabeledSample>& data,
                  std::uint64_t rng_seed);

double predict_probability(const Model& model, const FeatureVector& features);

// Threshold strictly above every probability; routes everything to the checker.
inline constexpr double kThreshAboveAll = 1.000001;

struct ThresholdResult {
  double thresh = kThreshAboveAll;
  double achieved_fpr = 0.0;
  // No Incorrect samples in validation: calibration impossible, threshold
  // set above all probabilities rather than trusting a vacuous FPR of zero.
  bool degenerate = false;
};

// Least candidate threshold from {0} + {unique probabilities} + {above-all}
// whose FPR over the incorrect probabilities is strictly below max_fpr,
// where FPR(t) counts incorrect probabilities >= t.
ThresholdResult select_threshold(const std::vector<double>& correct_probs,
                                 const std::vector<double>& incorrect_probs, double max_fpr);

struct CalibratedModel {
  Model model;
  double thresh = kThreshAboveAll;
  double calibration_fpr = 0.0;
  bool degenerate_validation = false;
};

// Stratified 80/20 split by class from rng_seed, trains on the 80%, picks the
// threshold on the held-out 20%.
CalibratedModel train_and_get_thresh(const ModelConfig& config, double max_fpr,
                                     const std::vector<LabeledSample>& correct,
                                     const std::vector<LabeledSample>& incorrect,
                                     std::uint64_t rng_seed);

// Versioned JSON text artifacts.
std::string save_model_json(const Model& model);
Model load_model_json(const std::string& text);
std::string save_calibrated_model(const CalibratedModel& model);
CalibratedModel load_calibrated_model(const std::string& text);

}  // namespace minijudge
