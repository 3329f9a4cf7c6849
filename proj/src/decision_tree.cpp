#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "eegcx/errors.hpp"
#include "family_scores.hpp"
#include "tree_builder.hpp"

namespace eegcx::detail {

namespace {

double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

// Acklam's rational approximation of the standard normal quantile.
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("normal_quantile: p must lie in (0,1)");
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

struct SplitChoice {
  bool found{false};
  size_t feature{0};
  double threshold{0.0};
  double score{0.0};  // gain, or gain ratio when configured
};

struct Builder {
  const LabeledDataset& data;
  const TreeBuildConfig& cfg;
  std::vector<TreeNode> nodes;

  SplitChoice best_split(const std::vector<size_t>& idx, double np, double nc,
                         const std::vector<size_t>& features) const {
    const double n = np + nc;
    const double parent_entropy = entropy_bits(np, nc);
    SplitChoice best;

    std::vector<std::pair<double, bool>> values;  // (value, is_patient)
    for (size_t f : features) {
      values.clear();
      values.reserve(idx.size());
      for (size_t i : idx) {
        values.emplace_back(data.rows[i][f], data.labels[i] == ClassLabel::Patient);
      }
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      double left_p = 0.0, left_c = 0.0;
      for (size_t i = 0; i + 1 < values.size(); ++i) {
        (values[i].second ? left_p : left_c) += 1.0;
        if (values[i].first == values[i + 1].first) continue;

        const double left_n = left_p + left_c;
        const double right_n = n - left_n;
        const double gain = parent_entropy -
                            (left_n / n) * entropy_bits(left_p, left_c) -
                            (right_n / n) * entropy_bits(np - left_p, nc - left_c);
        double score = gain;
        if (cfg.use_gain_ratio) {
          const double split_info =
              -(left_n / n) * log2_safe(left_n / n) - (right_n / n) * log2_safe(right_n / n);
          if (!(split_info > 0.0)) continue;
          score = gain / split_info;
        }
        if (!best.found || score > best.score) {
          best.found = true;
          best.feature = f;
          best.threshold = 0.5 * (values[i].first + values[i + 1].first);
          best.score = score;
        }
      }
    }
    if (best.found && !(best.score > 1e-12)) best.found = false;
    return best;
  }

  std::vector<size_t> candidate_features() const {
    const size_t k = data.n_cols();
    std::vector<size_t> features(k);
    std::iota(features.begin(), features.end(), 0);
    if (cfg.mtry == 0 || cfg.mtry >= k) return features;
    // Partial Fisher-Yates; sorted afterwards so that the lowest-feature
    // tie-break is independent of draw order.
    for (size_t i = 0; i < cfg.mtry; ++i) {
      const size_t j = i + static_cast<size_t>(cfg.rng->bounded(k - i));
      std::swap(features[i], features[j]);
    }
    features.resize(cfg.mtry);
    std::sort(features.begin(), features.end());
    return features;
  }

  int build(const std::vector<size_t>& idx) {
    double np = 0.0, nc = 0.0;
    for (size_t i : idx) (data.labels[i] == ClassLabel::Patient ? np : nc) += 1.0;

    const int node_id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{-1, 0.0, -1, -1, np, nc});

    if (idx.size() < cfg.min_samples || np == 0.0 || nc == 0.0) return node_id;

    const auto features = candidate_features();
    const auto split = best_split(idx, np, nc, features);
    if (!split.found) return node_id;

    std::vector<size_t> left_idx, right_idx;
    for (size_t i : idx) {
      (data.rows[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
    }
    nodes[node_id].feature = static_cast<int>(split.feature);
    nodes[node_id].threshold = split.threshold;
    const int left = build(left_idx);
    nodes[node_id].left = left;
    const int right = build(right_idx);
    nodes[node_id].right = right;
    return node_id;
  }
};

// Estimated subtree errors after pruning descendants in place.
double prune_rec(std::vector<TreeNode>& nodes, int id, double cf) {
  TreeNode& node = nodes[id];
  const double n = node.n_patient + node.n_control;
  const double leaf_errors =
      pessimistic_errors(n - std::max(node.n_patient, node.n_control), n, cf);
  if (node.feature < 0) return leaf_errors;

  const double subtree_errors =
      prune_rec(nodes, node.left, cf) + prune_rec(nodes, node.right, cf);
  if (subtree_errors >= leaf_errors) {
    node.feature = -1;
    node.left = -1;
    node.right = -1;
    return leaf_errors;
  }
  return subtree_errors;
}

void compact(DecisionTreeModel& tree) {
  std::vector<TreeNode> out;
  out.reserve(tree.nodes.size());
  // Depth-first copy of reachable nodes only.
  struct Rec {
    const std::vector<TreeNode>& src;
    std::vector<TreeNode>& dst;
    int copy(int id) {
      const int new_id = static_cast<int>(dst.size());
      dst.push_back(src[id]);
      if (src[id].feature >= 0) {
        const int l = copy(src[id].left);
        dst[new_id].left = l;
        const int r = copy(src[id].right);
        dst[new_id].right = r;
      }
      return new_id;
    }
  } rec{tree.nodes, out};
  rec.copy(0);
  tree.nodes = std::move(out);
}

}  // namespace

double entropy_bits(double n_patient, double n_control) {
  const double n = n_patient + n_control;
  if (n <= 0.0) return 0.0;
  const double pp = n_patient / n;
  const double pc = n_control / n;
  return -pp * log2_safe(pp) - pc * log2_safe(pc);
}

double pessimistic_errors(double errors, double n, double cf) {
  // Added-error margin in the C4.5 style: exact binomial bound at e=0,
  // linear interpolation below one error, continuity-corrected normal
  // approximation otherwise.
  std::function<double(double)> added = [&](double e) -> double {
    if (e < 1.0) {
      const double base = n * (1.0 - std::pow(cf, 1.0 / n));
      if (e == 0.0) return base;
      return base + e * (added(1.0) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = normal_quantile(1.0 - cf);
    const double z2 = z * z;
    const double f = (e + 0.5) / n;
    const double r = (f + z2 / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z2 / (4.0 * n * n))) /
                     (1.0 + z2 / n);
    return r * n - e;
  };
  return errors + added(errors);
}

DecisionTreeModel grow_tree(const LabeledDataset& data, const std::vector<size_t>& indices,
                            const TreeBuildConfig& cfg) {
  Builder builder{data, cfg, {}};
  builder.build(indices);
  return DecisionTreeModel{std::move(builder.nodes)};
}

void prune_tree(DecisionTreeModel& tree, double confidence) {
  prune_rec(tree.nodes, 0, confidence);
  compact(tree);
}

}  // namespace eegcx::detail

namespace eegcx {

TrainedModel train_decision_tree(const LabeledDataset& data, const DtParams& params) {
  if (data.rows.size() < 2) throw TrainingError("train_decision_tree: need at least 2 examples");
  if (data.n_cols() < 1) throw TrainingError("train_decision_tree: need at least 1 feature");

  std::vector<size_t> indices(data.rows.size());
  std::iota(indices.begin(), indices.end(), 0);
  detail::TreeBuildConfig cfg;
  cfg.min_samples = params.min_samples;
  cfg.use_gain_ratio = params.use_gain_ratio;
  auto tree = detail::grow_tree(data, indices, cfg);
  if (params.prune) detail::prune_tree(tree, params.prune_confidence);
  return {ClassifierKind::DecisionTree, data.feature_names, std::move(tree)};
}

double tree_patient_fraction(const DecisionTreeModel& tree, std::span<const double> x) {
  int id = 0;
  while (tree.nodes[id].feature >= 0) {
    const auto& node = tree.nodes[id];
    id = x[static_cast<size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  const auto& leaf = tree.nodes[id];
  const double n = leaf.n_patient + leaf.n_control;
  return n > 0.0 ? leaf.n_patient / n : 0.0;
}

}  // namespace eegcx
