#include "eegcx/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "eegcx/errors.hpp"
#include "eegcx/feature_space.hpp"
#include "eegcx/rng.hpp"

namespace eegcx {

namespace {

FeatureMatrix subset(const FeatureMatrix& matrix, const std::vector<size_t>& indices) {
  FeatureMatrix out;
  out.feature_names = matrix.feature_names;
  out.rows.reserve(indices.size());
  out.meta.reserve(indices.size());
  for (size_t i : indices) {
    out.rows.push_back(matrix.rows[i]);
    out.meta.push_back(matrix.meta[i]);
  }
  return out;
}

std::vector<FoldInstance> fold_instances(const FeatureMatrix& features, const CvConfig& config) {
  std::vector<FoldInstance> instances;
  instances.reserve(features.n_rows());
  for (size_t i = 0; i < features.n_rows(); ++i) {
    FoldInstance inst;
    inst.label = features.meta[i].label;
    inst.group = config.grouping == Grouping::BySubject ? features.meta[i].subject_id
                                                        : "row" + std::to_string(i);
    instances.push_back(std::move(inst));
  }
  return instances;
}

}  // namespace

std::vector<std::vector<size_t>> stratified_folds(const std::vector<FoldInstance>& instances,
                                                  const CvConfig& config) {
  if (config.folds < 2) throw ConfigError("stratified_folds: K must be >= 2");
  if (instances.empty()) throw ConfigError("stratified_folds: no instances");

  // Unique groups in first-appearance order; each must carry one label.
  std::vector<std::string> group_order;
  std::map<std::string, ClassLabel> group_label;
  for (const auto& inst : instances) {
    auto it = group_label.find(inst.group);
    if (it == group_label.end()) {
      group_label.emplace(inst.group, inst.label);
      group_order.push_back(inst.group);
    } else if (it->second != inst.label) {
      throw ConfigError("stratified_folds: group \"" + inst.group + "\" has conflicting labels");
    }
  }
  if (config.folds > group_order.size()) {
    throw ConfigError("stratified_folds: K = " + std::to_string(config.folds) + " exceeds the " +
                      std::to_string(group_order.size()) + " available groups");
  }

  // Deal shuffled groups class by class with one continuing cursor, so the
  // fold sizes stay balanced even when a class has fewer groups than folds.
  std::map<std::string, size_t> group_fold;
  size_t cursor = 0;
  for (int cls = 0; cls < 2; ++cls) {
    const ClassLabel label = cls == 0 ? ClassLabel::Patient : ClassLabel::Control;
    std::vector<std::string> members;
    for (const auto& g : group_order) {
      if (group_label[g] == label) members.push_back(g);
    }
    rng::Engine eng(rng::mix_seed(config.seed, static_cast<uint64_t>(cls) + 1));
    eng.shuffle(members);
    for (const auto& member : members) {
      group_fold[member] = cursor % config.folds;
      ++cursor;
    }
  }

  std::vector<std::vector<size_t>> folds(config.folds);
  for (size_t i = 0; i < instances.size(); ++i) {
    folds[group_fold[instances[i].group]].push_back(i);
  }
  return folds;
}

double compute_accuracy(std::span<const std::pair<ClassLabel, ClassLabel>> outcomes) {
  if (outcomes.empty()) throw ConfigError("compute_accuracy: no outcomes");
  size_t correct = 0;
  for (const auto& [predicted, truth] : outcomes) {
    if (predicted == truth) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

double compute_auc(std::span<const double> scores, std::span<const ClassLabel> truth) {
  if (scores.size() != truth.size()) throw ConfigError("compute_auc: size mismatch");
  if (scores.empty()) throw ConfigError("compute_auc: empty input");
  size_t n_pos = 0;
  for (auto t : truth) {
    if (t == ClassLabel::Patient) ++n_pos;
  }
  const size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw NumericError("compute_auc: both classes must be present");
  }

  // Mann-Whitney with average ranks over tie groups.
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (size_t t = i; t <= j; ++t) {
      if (truth[order[t]] == ClassLabel::Patient) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

LabeledDataset to_labeled(const FeatureMatrix& matrix) {
  LabeledDataset data;
  data.feature_names = matrix.feature_names;
  data.rows = matrix.rows;
  data.labels.reserve(matrix.meta.size());
  for (const auto& m : matrix.meta) data.labels.push_back(m.label);
  return data;
}

EvalReport run_cv(const FeatureMatrix& features, const CvConfig& config,
                  const std::vector<ClassifierKind>& classifiers) {
  if (features.n_rows() < 2) throw ConfigError("run_cv: need at least 2 instances");
  if (classifiers.empty()) throw ConfigError("run_cv: no classifiers selected");
  if (config.pc_counts.empty()) throw ConfigError("run_cv: pc_counts must not be empty");
  for (size_t m : config.pc_counts) {
    if (m < 1 || m > features.n_cols()) {
      throw ConfigError("run_cv: pc_count " + std::to_string(m) + " out of range [1, " +
                        std::to_string(features.n_cols()) + "]");
    }
  }

  const auto instances = fold_instances(features, config);
  const auto folds = stratified_folds(instances, config);
  const bool leaky = config.placement == PreprocessingPlacement::WholeDataset;
  const size_t n_pc = config.pc_counts.size();

  EvalReport report;
  report.config = config;
  report.leaky = leaky;
  report.classifiers = classifiers;
  report.pc_counts = config.pc_counts;
  report.cells.assign(classifiers.size(), std::vector<EvalCell>(n_pc));

  // Whole-dataset (LEAKY) preprocessing is fitted once on every row.
  std::vector<FeatureMatrix> leaked_projected(n_pc);
  std::vector<double> leaked_ev(n_pc, 0.0);
  if (leaky) {
    const auto scaler = fit_scaler(features);
    const auto scaled = apply_scaler(scaler, features);
    const auto pca = fit_pca(scaled);
    for (size_t p = 0; p < n_pc; ++p) {
      auto projected = project(pca, scaled, config.pc_counts[p]);
      if (config.restandardize_pcs) {
        const auto pc_scaler = fit_scaler(projected);
        projected = apply_scaler(pc_scaler, projected);
      }
      leaked_ev[p] = explained_variance(pca, config.pc_counts[p]);
      leaked_projected[p] = std::move(projected);
    }
  }

  std::vector<double> ev_sums(n_pc, 0.0);
  for (size_t f = 0; f < folds.size(); ++f) {
    const auto& test_idx = folds[f];
    std::vector<size_t> train_idx;
    train_idx.reserve(features.n_rows() - test_idx.size());
    for (size_t i = 0, t = 0; i < features.n_rows(); ++i) {
      if (t < test_idx.size() && test_idx[t] == i) {
        ++t;
      } else {
        train_idx.push_back(i);
      }
    }

    try {
      for (size_t p = 0; p < n_pc; ++p) {
        const size_t m = config.pc_counts[p];
        FeatureMatrix train_feats, test_feats;
        if (leaky) {
          train_feats = subset(leaked_projected[p], train_idx);
          test_feats = subset(leaked_projected[p], test_idx);
        } else {
          // Every statistic is fitted on training rows; test rows only ever
          // pass through apply/project.
          const auto train_raw = subset(features, train_idx);
          const auto test_raw = subset(features, test_idx);
          const auto scaler = fit_scaler(train_raw);
          const auto train_scaled = apply_scaler(scaler, train_raw);
          const auto test_scaled = apply_scaler(scaler, test_raw);
          const auto pca = fit_pca(train_scaled);
          train_feats = project(pca, train_scaled, m);
          test_feats = project(pca, test_scaled, m);
          if (config.restandardize_pcs) {
            const auto pc_scaler = fit_scaler(train_feats);
            train_feats = apply_scaler(pc_scaler, train_feats);
            test_feats = apply_scaler(pc_scaler, test_feats);
          }
          ev_sums[p] += explained_variance(pca, m);
        }

        const auto train_data = to_labeled(train_feats);
        for (size_t c = 0; c < classifiers.size(); ++c) {
          const auto kind = classifiers[c];
          const uint64_t seed =
              rng::mix_seed(config.seed, f + 1, static_cast<uint64_t>(kind) + 1, m);
          const auto model = train_classifier(kind, train_data, seed);
          for (size_t t = 0; t < test_idx.size(); ++t) {
            PredictionRecord rec;
            rec.row = test_idx[t];
            rec.subject_id = features.meta[test_idx[t]].subject_id;
            rec.fold = f;
            rec.classifier = kind;
            rec.pc_count = m;
            rec.score = predict_score(model, test_feats.rows[t]);
            rec.predicted = predict_label(model, test_feats.rows[t]);
            rec.truth = features.meta[test_idx[t]].label;
            report.predictions.push_back(std::move(rec));
          }
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw TrainingError("run_cv: fold " + std::to_string(f) + ": " + e.what());
    }
  }

  // Pooled-over-folds aggregation per (classifier, pc_count).
  report.explained_variance_pct.resize(n_pc);
  report.average_accuracy_pct.assign(n_pc, 0.0);
  for (size_t p = 0; p < n_pc; ++p) {
    report.explained_variance_pct[p] =
        leaky ? leaked_ev[p] : ev_sums[p] / static_cast<double>(folds.size());
    for (size_t c = 0; c < classifiers.size(); ++c) {
      std::vector<std::pair<ClassLabel, ClassLabel>> outcomes;
      std::vector<double> scores;
      std::vector<ClassLabel> truth;
      for (const auto& rec : report.predictions) {
        if (rec.classifier == classifiers[c] && rec.pc_count == config.pc_counts[p]) {
          outcomes.emplace_back(rec.predicted, rec.truth);
          scores.push_back(rec.score);
          truth.push_back(rec.truth);
        }
      }
      report.cells[c][p].accuracy_pct = compute_accuracy(outcomes);
      report.cells[c][p].auc = compute_auc(scores, truth);
      report.average_accuracy_pct[p] += report.cells[c][p].accuracy_pct;
    }
    report.average_accuracy_pct[p] /= static_cast<double>(classifiers.size());
  }
  return report;
}

}  // namespace eegcx
