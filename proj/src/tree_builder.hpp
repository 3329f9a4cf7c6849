#pragma once

#include <vector>

#include "eegcx/classifiers.hpp"
#include "eegcx/rng.hpp"

// Shared tree growing for the single C4.5-style tree and the forest members.
// Internal to the library.
namespace eegcx::detail {

struct TreeBuildConfig {
  size_t min_samples{2};       // nodes below this size become leaves
  bool use_gain_ratio{false};
  size_t mtry{0};              // 0 = all features are split candidates
  rng::Engine* rng{nullptr};   // required when mtry > 0
};

DecisionTreeModel grow_tree(const LabeledDataset& data, const std::vector<size_t>& indices,
                            const TreeBuildConfig& cfg);

// C4.5 pessimistic error pruning at the given confidence level.
void prune_tree(DecisionTreeModel& tree, double confidence);

double entropy_bits(double n_patient, double n_control);

// Predicted error count for a leaf with `errors` mistakes out of `n` at
// confidence level `cf`: the observed errors plus the pessimistic margin.
// Normal-approximation upper bound with the C4.5 small-sample handling
// (exact binomial at e=0, interpolation below e=1, continuity correction).
double pessimistic_errors(double errors, double n, double cf);

}  // namespace eegcx::detail
