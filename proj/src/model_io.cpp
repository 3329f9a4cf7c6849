#include <nlohmann/json.hpp>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"

namespace eegcx {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json tree_to_json(const DecisionTreeModel& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({{"f", n.feature},
                     {"t", n.threshold},
                     {"l", n.left},
                     {"r", n.right},
                     {"np", n.n_patient},
                     {"nc", n.n_control}});
  }
  return nodes;
}

DecisionTreeModel tree_from_json(const json& nodes) {
  DecisionTreeModel tree;
  for (const auto& n : nodes) {
    tree.nodes.push_back(TreeNode{n.at("f").get<int>(), n.at("t").get<double>(),
                                  n.at("l").get<int>(), n.at("r").get<int>(),
                                  n.at("np").get<double>(), n.at("nc").get<double>()});
  }
  if (tree.nodes.empty()) throw DataError("model json: empty tree");
  return tree;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["family"] = to_string(model.kind);
  doc["feature_names"] = model.feature_names;

  switch (model.kind) {
    case ClassifierKind::NaiveBayes: {
      const auto& nb = std::get<NaiveBayesModel>(model.params);
      doc["prior_patient"] = nb.prior_patient;
      doc["prior_control"] = nb.prior_control;
      doc["mean_patient"] = nb.mean_patient;
      doc["var_patient"] = nb.var_patient;
      doc["mean_control"] = nb.mean_control;
      doc["var_control"] = nb.var_control;
      break;
    }
    case ClassifierKind::Logistic: {
      doc["beta"] = std::get<LogisticModel>(model.params).beta;
      break;
    }
    case ClassifierKind::Mlp: {
      const auto& net = std::get<MlpModel>(model.params);
      doc["n_inputs"] = net.n_inputs;
      doc["n_hidden"] = net.n_hidden;
      doc["weights"] = net.weights;
      doc["seed"] = net.seed;
      break;
    }
    case ClassifierKind::SvmLinear:
    case ClassifierKind::SvmPoly2: {
      const auto& svm = std::get<SvmModel>(model.params);
      doc["kernel"] = svm.kernel == SvmKernel::Linear ? "linear" : "poly2";
      doc["support_vectors"] = svm.support_vectors;
      doc["alpha"] = svm.alpha;
      doc["sv_labels"] = svm.sv_labels;
      doc["bias"] = svm.bias;
      break;
    }
    case ClassifierKind::DecisionTree: {
      doc["nodes"] = tree_to_json(std::get<DecisionTreeModel>(model.params));
      break;
    }
    case ClassifierKind::RandomForest: {
      const auto& forest = std::get<RandomForestModel>(model.params);
      doc["seed"] = forest.seed;
      doc["tree_seeds"] = forest.tree_seeds;
      json trees = json::array();
      for (const auto& tree : forest.trees) trees.push_back(tree_to_json(tree));
      doc["trees"] = std::move(trees);
      break;
    }
  }
  return doc.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model json: parse failure: ") + e.what());
  }
  try {
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw DataError("model json: unsupported format version");
    }
    TrainedModel model;
    model.kind = classifier_kind_from_string(doc.at("family").get<std::string>());
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();

    switch (model.kind) {
      case ClassifierKind::NaiveBayes: {
        NaiveBayesModel nb;
        nb.prior_patient = doc.at("prior_patient").get<double>();
        nb.prior_control = doc.at("prior_control").get<double>();
        nb.mean_patient = doc.at("mean_patient").get<std::vector<double>>();
        nb.var_patient = doc.at("var_patient").get<std::vector<double>>();
        nb.mean_control = doc.at("mean_control").get<std::vector<double>>();
        nb.var_control = doc.at("var_control").get<std::vector<double>>();
        model.params = std::move(nb);
        break;
      }
      case ClassifierKind::Logistic: {
        LogisticModel lr;
        lr.beta = doc.at("beta").get<std::vector<double>>();
        model.params = std::move(lr);
        break;
      }
      case ClassifierKind::Mlp: {
        MlpModel net;
        net.n_inputs = doc.at("n_inputs").get<size_t>();
        net.n_hidden = doc.at("n_hidden").get<size_t>();
        net.weights = doc.at("weights").get<std::vector<double>>();
        net.seed = doc.at("seed").get<uint64_t>();
        model.params = std::move(net);
        break;
      }
      case ClassifierKind::SvmLinear:
      case ClassifierKind::SvmPoly2: {
        SvmModel svm;
        svm.kernel =
            doc.at("kernel").get<std::string>() == "linear" ? SvmKernel::Linear : SvmKernel::Poly2;
        svm.support_vectors = doc.at("support_vectors").get<std::vector<std::vector<double>>>();
        svm.alpha = doc.at("alpha").get<std::vector<double>>();
        svm.sv_labels = doc.at("sv_labels").get<std::vector<double>>();
        svm.bias = doc.at("bias").get<double>();
        model.params = std::move(svm);
        break;
      }
      case ClassifierKind::DecisionTree: {
        model.params = tree_from_json(doc.at("nodes"));
        break;
      }
      case ClassifierKind::RandomForest: {
        RandomForestModel forest;
        forest.seed = doc.at("seed").get<uint64_t>();
        forest.tree_seeds = doc.at("tree_seeds").get<std::vector<uint64_t>>();
        for (const auto& t : doc.at("trees")) forest.trees.push_back(tree_from_json(t));
        model.params = std::move(forest);
        break;
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model json: missing or mistyped field: ") + e.what());
  }
}

}  // namespace eegcx
