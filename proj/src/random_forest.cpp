#include <bit>
#include <numeric>

#include "eegcx/errors.hpp"
#include "family_scores.hpp"
#include "tree_builder.hpp"

namespace eegcx {

namespace {
constexpr size_t kEnsembleSize = 100;
}

size_t forest_feature_subset_size(size_t k) {
  const size_t floor_log2 = static_cast<size_t>(std::bit_width(k) - 1);
  return std::min(k, floor_log2 + 1);
}

TrainedModel train_random_forest(const LabeledDataset& data, uint64_t seed) {
  const size_t n = data.rows.size();
  if (n < 2) throw TrainingError("train_random_forest: need at least 2 examples");
  if (data.n_cols() < 1) throw TrainingError("train_random_forest: need at least 1 feature");

  RandomForestModel forest;
  forest.seed = seed;
  forest.tree_seeds.reserve(kEnsembleSize);
  forest.trees.reserve(kEnsembleSize);

  const size_t mtry = forest_feature_subset_size(data.n_cols());
  for (size_t t = 0; t < kEnsembleSize; ++t) {
    const uint64_t tree_seed = rng::mix_seed(seed, t);
    forest.tree_seeds.push_back(tree_seed);
    rng::Engine eng(tree_seed);

    std::vector<size_t> bootstrap(n);
    for (size_t i = 0; i < n; ++i) bootstrap[i] = static_cast<size_t>(eng.bounded(n));

    detail::TreeBuildConfig cfg;
    cfg.min_samples = 2;
    cfg.mtry = mtry;
    cfg.rng = &eng;
    forest.trees.push_back(detail::grow_tree(data, bootstrap, cfg));
  }
  return {ClassifierKind::RandomForest, data.feature_names, std::move(forest)};
}

}  // namespace eegcx
