#include <cmath>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"

namespace eegcx {

namespace {

void class_stats(const LabeledDataset& data, ClassLabel which, std::vector<double>& mean,
                 std::vector<double>& var) {
  const size_t k = data.n_cols();
  mean.assign(k, 0.0);
  var.assign(k, 0.0);
  size_t count = 0;
  for (size_t i = 0; i < data.rows.size(); ++i) {
    if (data.labels[i] != which) continue;
    ++count;
    for (size_t c = 0; c < k; ++c) mean[c] += data.rows[i][c];
  }
  if (count < 2) {
    throw TrainingError(std::string("train_naive_bayes: class ") + to_string(which) +
                        " has fewer than 2 examples");
  }
  for (size_t c = 0; c < k; ++c) mean[c] /= static_cast<double>(count);
  for (size_t i = 0; i < data.rows.size(); ++i) {
    if (data.labels[i] != which) continue;
    for (size_t c = 0; c < k; ++c) {
      const double d = data.rows[i][c] - mean[c];
      var[c] += d * d;
    }
  }
  for (size_t c = 0; c < k; ++c) {
    var[c] /= static_cast<double>(count - 1);
    if (var[c] < 1e-9) var[c] = 1e-9;
  }
}

}  // namespace

TrainedModel train_naive_bayes(const LabeledDataset& data) {
  if (data.rows.empty()) throw TrainingError("train_naive_bayes: empty dataset");

  size_t n_patient = 0;
  for (auto label : data.labels) {
    if (label == ClassLabel::Patient) ++n_patient;
  }
  const size_t n = data.rows.size();

  NaiveBayesModel nb;
  nb.prior_patient = static_cast<double>(n_patient) / static_cast<double>(n);
  nb.prior_control = static_cast<double>(n - n_patient) / static_cast<double>(n);
  class_stats(data, ClassLabel::Patient, nb.mean_patient, nb.var_patient);
  class_stats(data, ClassLabel::Control, nb.mean_control, nb.var_control);

  return {ClassifierKind::NaiveBayes, data.feature_names, std::move(nb)};
}

double naive_bayes_score(const NaiveBayesModel& nb, std::span<const double> x) {
  double log_p = std::log(nb.prior_patient);
  double log_c = std::log(nb.prior_control);
  for (size_t j = 0; j < x.size(); ++j) {
    const double dp = x[j] - nb.mean_patient[j];
    const double dc = x[j] - nb.mean_control[j];
    log_p += -0.5 * std::log(2.0 * M_PI * nb.var_patient[j]) - dp * dp / (2.0 * nb.var_patient[j]);
    log_c += -0.5 * std::log(2.0 * M_PI * nb.var_control[j]) - dc * dc / (2.0 * nb.var_control[j]);
  }
  // Posterior for Patient, computed without exponent overflow.
  const double d = log_c - log_p;
  if (d > 700.0) return 0.0;
  if (d < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(d));
}

}  // namespace eegcx
