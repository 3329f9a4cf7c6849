#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eegcx/types.hpp"

namespace eegcx {

enum class ClassifierKind {
  NaiveBayes,
  Logistic,
  Mlp,
  SvmLinear,
  SvmPoly2,
  DecisionTree,
  RandomForest,
};

// The seven benchmark configurations, in report row order.
const std::vector<ClassifierKind>& all_classifiers();

const char* to_string(ClassifierKind kind);
const char* display_name(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct NaiveBayesModel {
  double prior_patient{0.0};
  double prior_control{0.0};
  std::vector<double> mean_patient, var_patient;
  std::vector<double> mean_control, var_control;
};

struct LogisticModel {
  std::vector<double> beta;  // beta[0] = intercept
};

// One hidden sigmoid layer of ceil((k+1)/2) units and a sigmoid output.
// Weight layout: W1 row-major (hidden x inputs), b1, w2, b2.
struct MlpModel {
  size_t n_inputs{0};
  size_t n_hidden{0};
  std::vector<double> weights;
  uint64_t seed{0};
};

enum class SvmKernel { Linear, Poly2 };

struct SvmModel {
  SvmKernel kernel{SvmKernel::Linear};
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alpha;
  std::vector<double> sv_labels;  // +1 patient, -1 control
  double bias{0.0};
};

struct TreeNode {
  int feature{-1};  // -1 marks a leaf
  double threshold{0.0};
  int left{-1};
  int right{-1};
  double n_patient{0.0};
  double n_control{0.0};
};

struct DecisionTreeModel {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct RandomForestModel {
  uint64_t seed{0};
  std::vector<uint64_t> tree_seeds;
  std::vector<DecisionTreeModel> trees;
};

struct TrainedModel {
  ClassifierKind kind{ClassifierKind::NaiveBayes};
  std::vector<std::string> feature_names;
  std::variant<NaiveBayesModel, LogisticModel, MlpModel, SvmModel, DecisionTreeModel,
               RandomForestModel>
      params;
};

struct DtParams {
  size_t min_samples{2};       // nodes smaller than this become leaves
  double prune_confidence{0.25};
  bool prune{true};
  bool use_gain_ratio{false};  // plain information gain by default
};

TrainedModel train_naive_bayes(const LabeledDataset& data);
TrainedModel train_logistic(const LabeledDataset& data);
TrainedModel train_mlp(const LabeledDataset& data, uint64_t seed);
TrainedModel train_svm(const LabeledDataset& data, SvmKernel kernel);
TrainedModel train_decision_tree(const LabeledDataset& data, const DtParams& params = {});
TrainedModel train_random_forest(const LabeledDataset& data, uint64_t seed);

// int(log2 k) + 1 candidate features per forest split.
size_t forest_feature_subset_size(size_t k);

// Dispatch over the seven configurations; seed is used by MLP and RF only.
TrainedModel train_classifier(ClassifierKind kind, const LabeledDataset& data, uint64_t seed);

// Monotone confidence for class Patient: NB posterior, LR probability, MLP
// output, SVM decision value, DT leaf fraction, RF vote fraction.
double predict_score(const TrainedModel& model, std::span<const double> x);

// Patient iff the score exceeds the family threshold (0.5 for probabilistic
// families, 0 for SVM); ties go to Control.
ClassLabel predict_label(const TrainedModel& model, std::span<const double> x);

// Versioned JSON round trip; deserialized models replay predictions
// bit-exactly.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

// MLP internals, exposed for the finite-difference gradient oracle.
MlpModel mlp_init(size_t n_inputs, uint64_t seed);
double mlp_forward(const MlpModel& net, std::span<const double> x);
double mlp_loss(const MlpModel& net, const LabeledDataset& data);
std::vector<double> mlp_gradient(const MlpModel& net, const LabeledDataset& data);

}  // namespace eegcx
