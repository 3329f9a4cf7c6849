#include "eegcx/classifiers.hpp"

#include <cmath>

#include "eegcx/errors.hpp"
#include "family_scores.hpp"

namespace eegcx {

const std::vector<ClassifierKind>& all_classifiers() {
  static const std::vector<ClassifierKind> kinds = {
      ClassifierKind::Mlp,          ClassifierKind::Logistic,   ClassifierKind::SvmLinear,
      ClassifierKind::SvmPoly2,     ClassifierKind::DecisionTree, ClassifierKind::RandomForest,
      ClassifierKind::NaiveBayes};
  return kinds;
}

const char* to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: return "naive_bayes";
    case ClassifierKind::Logistic: return "logistic";
    case ClassifierKind::Mlp: return "mlp";
    case ClassifierKind::SvmLinear: return "svm_linear";
    case ClassifierKind::SvmPoly2: return "svm_poly2";
    case ClassifierKind::DecisionTree: return "decision_tree";
    case ClassifierKind::RandomForest: return "random_forest";
  }
  return "unknown";
}

const char* display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: return "Naive Bayes";
    case ClassifierKind::Logistic: return "Logistic regression";
    case ClassifierKind::Mlp: return "Multilayer perceptron";
    case ClassifierKind::SvmLinear: return "SVM with linear kernel";
    case ClassifierKind::SvmPoly2: return "SVM with polynomial kernel (p=2)";
    case ClassifierKind::DecisionTree: return "Decision tree";
    case ClassifierKind::RandomForest: return "Random forest";
  }
  return "unknown";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  for (auto kind : all_classifiers()) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown classifier \"" + name + "\"");
}

TrainedModel train_classifier(ClassifierKind kind, const LabeledDataset& data, uint64_t seed) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: return train_naive_bayes(data);
    case ClassifierKind::Logistic: return train_logistic(data);
    case ClassifierKind::Mlp: return train_mlp(data, seed);
    case ClassifierKind::SvmLinear: return train_svm(data, SvmKernel::Linear);
    case ClassifierKind::SvmPoly2: return train_svm(data, SvmKernel::Poly2);
    case ClassifierKind::DecisionTree: return train_decision_tree(data);
    case ClassifierKind::RandomForest: return train_random_forest(data, seed);
  }
  throw ConfigError("train_classifier: unknown classifier kind");
}

double predict_score(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.feature_names.size()) {
    throw ConfigError("predict: input has " + std::to_string(x.size()) + " features, model expects " +
                      std::to_string(model.feature_names.size()));
  }
  switch (model.kind) {
    case ClassifierKind::NaiveBayes:
      return naive_bayes_score(std::get<NaiveBayesModel>(model.params), x);
    case ClassifierKind::Logistic:
      return logistic_score(std::get<LogisticModel>(model.params), x);
    case ClassifierKind::Mlp:
      return mlp_forward(std::get<MlpModel>(model.params), x);
    case ClassifierKind::SvmLinear:
    case ClassifierKind::SvmPoly2:
      return svm_decision(std::get<SvmModel>(model.params), x);
    case ClassifierKind::DecisionTree:
      return tree_patient_fraction(std::get<DecisionTreeModel>(model.params), x);
    case ClassifierKind::RandomForest: {
      const auto& forest = std::get<RandomForestModel>(model.params);
      size_t votes = 0;
      for (const auto& tree : forest.trees) {
        if (tree_patient_fraction(tree, x) > 0.5) ++votes;
      }
      return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
    }
  }
  throw ConfigError("predict: unknown classifier kind");
}

ClassLabel predict_label(const TrainedModel& model, std::span<const double> x) {
  const double score = predict_score(model, x);
  const double threshold =
      (model.kind == ClassifierKind::SvmLinear || model.kind == ClassifierKind::SvmPoly2) ? 0.0 : 0.5;
  return score > threshold ? ClassLabel::Patient : ClassLabel::Control;
}

}  // namespace eegcx
