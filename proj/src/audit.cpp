#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegcx/errors.hpp"
#include "eegcx/eval.hpp"
#include "eegcx/feature_space.hpp"
#include "eegcx/rng.hpp"

namespace eegcx {

namespace {

// Pure-noise features with random balanced labels: the null world in which
// any accuracy above chance is optimism.
FeatureMatrix null_dataset(size_t n, size_t k, rng::Engine& eng) {
  FeatureMatrix matrix;
  matrix.feature_names.reserve(k);
  for (size_t c = 0; c < k; ++c) matrix.feature_names.push_back("x" + std::to_string(c + 1));
  matrix.rows.assign(n, std::vector<double>(k, 0.0));
  matrix.meta.resize(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < k; ++c) matrix.rows[i][c] = eng.normal();
  }
  std::vector<ClassLabel> labels(n, ClassLabel::Control);
  for (size_t i = 0; i < n / 2; ++i) labels[i] = ClassLabel::Patient;
  eng.shuffle(labels);
  for (size_t i = 0; i < n; ++i) {
    matrix.meta[i] = {"s" + std::to_string(i + 1), labels[i]};
  }
  return matrix;
}

// Features ranked by the absolute class-mean gap over the given rows;
// ties resolved toward the lower index.
std::vector<size_t> top_gap_features(const FeatureMatrix& matrix, const std::vector<size_t>& rows,
                                     size_t how_many) {
  const size_t k = matrix.n_cols();
  std::vector<double> gap(k, 0.0);
  std::vector<double> mean_p(k, 0.0), mean_c(k, 0.0);
  size_t np = 0, nc = 0;
  for (size_t i : rows) {
    const bool patient = matrix.meta[i].label == ClassLabel::Patient;
    (patient ? np : nc) += 1;
    for (size_t c = 0; c < k; ++c) (patient ? mean_p : mean_c)[c] += matrix.rows[i][c];
  }
  for (size_t c = 0; c < k; ++c) {
    gap[c] = std::abs(mean_p[c] / static_cast<double>(std::max<size_t>(np, 1)) -
                      mean_c[c] / static_cast<double>(std::max<size_t>(nc, 1)));
  }
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return gap[a] > gap[b]; });
  order.resize(std::min(how_many, k));
  std::sort(order.begin(), order.end());
  return order;
}

FeatureMatrix select_columns(const FeatureMatrix& matrix, const std::vector<size_t>& cols) {
  FeatureMatrix out;
  out.meta = matrix.meta;
  for (size_t c : cols) out.feature_names.push_back(matrix.feature_names[c]);
  out.rows.assign(matrix.n_rows(), std::vector<double>(cols.size(), 0.0));
  for (size_t i = 0; i < matrix.n_rows(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) out.rows[i][j] = matrix.rows[i][cols[j]];
  }
  return out;
}

FeatureMatrix subset_rows(const FeatureMatrix& matrix, const std::vector<size_t>& rows) {
  FeatureMatrix out;
  out.feature_names = matrix.feature_names;
  for (size_t i : rows) {
    out.rows.push_back(matrix.rows[i]);
    out.meta.push_back(matrix.meta[i]);
  }
  return out;
}

enum class Pipeline { Proper, PreprocessingLeak, SelectionLeak };

double run_pipeline(Pipeline pipeline, const FeatureMatrix& matrix, size_t folds, uint64_t seed) {
  const size_t n = matrix.n_rows();
  const size_t top = std::min<size_t>(5, matrix.n_cols());

  CvConfig cv;
  cv.folds = folds;
  cv.seed = seed;
  cv.grouping = Grouping::ByInstance;
  std::vector<FoldInstance> insts;
  insts.reserve(n);
  for (size_t i = 0; i < n; ++i) insts.push_back({"row" + std::to_string(i), matrix.meta[i].label});
  const auto fold_sets = stratified_folds(insts, cv);

  // Whole-dataset statistics for the two leaky variants.
  FeatureMatrix leaked;
  if (pipeline == Pipeline::SelectionLeak) {
    std::vector<size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    leaked = select_columns(matrix, top_gap_features(matrix, all_rows, top));
  } else if (pipeline == Pipeline::PreprocessingLeak) {
    const auto scaler = fit_scaler(matrix);
    const auto scaled = apply_scaler(scaler, matrix);
    const auto pca = fit_pca(scaled);
    leaked = project(pca, scaled, top);
  }

  size_t correct = 0, total = 0;
  for (const auto& test_idx : fold_sets) {
    std::vector<size_t> train_idx;
    for (size_t i = 0, t = 0; i < n; ++i) {
      if (t < test_idx.size() && test_idx[t] == i) {
        ++t;
      } else {
        train_idx.push_back(i);
      }
    }
    FeatureMatrix train, test;
    if (pipeline == Pipeline::Proper) {
      const auto cols = top_gap_features(matrix, train_idx, top);
      const auto view = select_columns(matrix, cols);
      train = subset_rows(view, train_idx);
      test = subset_rows(view, test_idx);
    } else {
      train = subset_rows(leaked, train_idx);
      test = subset_rows(leaked, test_idx);
    }
    const auto model = train_naive_bayes(to_labeled(train));
    for (size_t i = 0; i < test.n_rows(); ++i) {
      if (predict_label(model, test.rows[i]) == test.meta[i].label) ++correct;
      ++total;
    }
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

struct Moments {
  double mean{0.0};
  double sd{0.0};
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return m;
}

void validate_audit(size_t n, size_t k, size_t seeds, size_t folds) {
  if (n < 10) throw ConfigError("audit: n must be >= 10");
  if (k < 2) throw ConfigError("audit: k must be >= 2");
  if (seeds < 1) throw ConfigError("audit: seeds must be >= 1");
  if (folds < 2 || folds > n) throw ConfigError("audit: folds must lie in [2, n]");
}

}  // namespace

std::vector<AuditRow> leakage_audit(const AuditConfig& config) {
  validate_audit(config.n, config.k, config.seeds, config.folds);

  std::vector<double> acc_proper, acc_prep, acc_sel;
  for (size_t rep = 0; rep < config.seeds; ++rep) {
    rng::Engine eng(rng::mix_seed(config.seed, rep));
    const auto matrix = null_dataset(config.n, config.k, eng);
    const uint64_t fold_seed = rng::mix_seed(config.seed, rep, 1);
    acc_proper.push_back(run_pipeline(Pipeline::Proper, matrix, config.folds, fold_seed));
    acc_prep.push_back(run_pipeline(Pipeline::PreprocessingLeak, matrix, config.folds, fold_seed));
    acc_sel.push_back(run_pipeline(Pipeline::SelectionLeak, matrix, config.folds, fold_seed));
  }

  std::vector<AuditRow> rows;
  const auto mp = moments(acc_proper);
  const auto mb = moments(acc_prep);
  const auto ms = moments(acc_sel);
  rows.push_back({"proper", mp.mean, mp.sd});
  rows.push_back({"preprocessing_leak", mb.mean, mb.sd});
  rows.push_back({"selection_leak", ms.mean, ms.sd});
  return rows;
}

std::vector<OptimismPoint> optimism_curve(const std::vector<size_t>& sample_sizes,
                                          const std::vector<size_t>& feature_counts, size_t seeds,
                                          size_t folds, uint64_t seed) {
  if (sample_sizes.empty() || feature_counts.empty()) {
    throw ConfigError("optimism_curve: size and feature lists must not be empty");
  }
  std::vector<OptimismPoint> points;
  for (size_t n : sample_sizes) {
    for (size_t k : feature_counts) {
      validate_audit(n, k, seeds, folds);
      std::vector<double> accs;
      accs.reserve(seeds);
      for (size_t rep = 0; rep < seeds; ++rep) {
        rng::Engine eng(rng::mix_seed(seed, n, k, rep));
        const auto matrix = null_dataset(n, k, eng);
        const uint64_t fold_seed = rng::mix_seed(seed, n * 31 + k, rep, 1);
        accs.push_back(run_pipeline(Pipeline::SelectionLeak, matrix, folds, fold_seed));
      }
      const auto m = moments(accs);
      points.push_back({n, k, m.mean, m.sd});
    }
  }
  return points;
}

}  // namespace eegcx
