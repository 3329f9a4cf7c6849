#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eegcx/classifiers.hpp"
#include "eegcx/types.hpp"

namespace eegcx {

enum class Grouping { ByInstance, BySubject };

enum class PreprocessingPlacement { InsideFolds, WholeDataset };

struct CvConfig {
  size_t folds{10};
  uint64_t seed{0};
  Grouping grouping{Grouping::BySubject};
  PreprocessingPlacement placement{PreprocessingPlacement::InsideFolds};
  std::vector<size_t> pc_counts{1, 2, 3, 10};
  bool restandardize_pcs{true};
};

struct FoldInstance {
  std::string group;
  ClassLabel label{ClassLabel::Control};
};

// Groups are shuffled per seed within each class and dealt round-robin, so
// folds are disjoint, cover everything, and stay class-proportional within
// one group. With subject grouping no subject straddles folds.
std::vector<std::vector<size_t>> stratified_folds(const std::vector<FoldInstance>& instances,
                                                  const CvConfig& config);

struct PredictionRecord {
  size_t row{0};
  std::string subject_id;
  size_t fold{0};
  ClassifierKind classifier{ClassifierKind::NaiveBayes};
  size_t pc_count{0};
  double score{0.0};
  ClassLabel predicted{ClassLabel::Control};
  ClassLabel truth{ClassLabel::Control};
};

struct EvalCell {
  double accuracy_pct{0.0};
  double auc{0.0};
};

struct EvalReport {
  CvConfig config;
  bool leaky{false};
  std::vector<ClassifierKind> classifiers;
  std::vector<size_t> pc_counts;
  std::vector<std::vector<EvalCell>> cells;        // [classifier][pc_count]
  std::vector<double> explained_variance_pct;      // per pc_count
  std::vector<double> average_accuracy_pct;        // per pc_count, across classifiers
  std::vector<PredictionRecord> predictions;
};

// Stratified K-fold evaluation over the classifier set and pc_count grid.
// InsideFolds fits scaler/PCA on training rows only; WholeDataset fits them
// once on everything first — the contaminated replication mode, stamped
// LEAKY in every artifact.
EvalReport run_cv(const FeatureMatrix& features, const CvConfig& config,
                  const std::vector<ClassifierKind>& classifiers = all_classifiers());

// 100 * correct / total over (predicted, truth) pairs.
double compute_accuracy(std::span<const std::pair<ClassLabel, ClassLabel>> outcomes);

// Area under the ROC via the rank statistic (ties count half).
double compute_auc(std::span<const double> scores, std::span<const ClassLabel> truth);

struct AuditConfig {
  size_t n{34};
  size_t k{38};
  size_t seeds{50};
  size_t folds{10};
  uint64_t seed{42};
};

struct AuditRow {
  std::string pipeline;
  double mean_accuracy_pct{0.0};
  double sd_accuracy_pct{0.0};
};

// Null-data Monte-Carlo over three pipelines: (a) proper (feature ranking
// inside folds), (b) preprocessing leak (whole-dataset scaling/PCA),
// (c) selection leak (top features picked on all rows before CV).
std::vector<AuditRow> leakage_audit(const AuditConfig& config);

struct OptimismPoint {
  size_t n{0};
  size_t k{0};
  double mean_accuracy_pct{0.0};
  double sd_accuracy_pct{0.0};
};

// Selection-leak pipeline on null data over a grid of sample sizes and
// feature counts; quantifies how optimism grows as n shrinks or k grows.
std::vector<OptimismPoint> optimism_curve(const std::vector<size_t>& sample_sizes,
                                          const std::vector<size_t>& feature_counts, size_t seeds,
                                          size_t folds, uint64_t seed);

LabeledDataset to_labeled(const FeatureMatrix& matrix);

}  // namespace eegcx
