#include <cmath>

#include <Eigen/Dense>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"

namespace eegcx {

namespace {

constexpr double kRidge = 1e-8;
constexpr double kGradTol = 1e-8;
constexpr int kMaxIter = 200;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log1pexp(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Ridge-penalized negative log-likelihood.
double penalized_nll(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd z = x * beta;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    nll += log1pexp(z(i)) - y(i) * z(i);
  }
  return nll + 0.5 * kRidge * beta.squaredNorm();
}

}  // namespace

TrainedModel train_logistic(const LabeledDataset& data) {
  const size_t n = data.rows.size();
  const size_t k = data.n_cols();
  if (n == 0) throw TrainingError("train_logistic: empty dataset");

  bool has_patient = false, has_control = false;
  for (auto label : data.labels) {
    (label == ClassLabel::Patient ? has_patient : has_control) = true;
  }
  if (!has_patient || !has_control) {
    throw TrainingError("train_logistic: both classes must be present");
  }

  Eigen::MatrixXd x(n, k + 1);
  Eigen::VectorXd y(n);
  for (size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (size_t c = 0; c < k; ++c) {
      const double v = data.rows[i][c];
      if (!std::isfinite(v)) throw TrainingError("train_logistic: non-finite feature value");
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c + 1)) = v;
    }
    y(static_cast<Eigen::Index>(i)) = data.labels[i] == ClassLabel::Patient ? 1.0 : 0.0;
  }

  // Damped Newton on the ridge-penalized log-likelihood.
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k + 1));
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd z = x * beta;
    Eigen::VectorXd p(z.size()), w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      p(i) = sigmoid(z(i));
      w(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
    }
    const Eigen::VectorXd grad = x.transpose() * (y - p) - kRidge * beta;
    if (grad.norm() < kGradTol) break;

    Eigen::MatrixXd hess = x.transpose() * w.asDiagonal() * x;
    hess.diagonal().array() += kRidge;
    const Eigen::VectorXd dir = hess.ldlt().solve(grad);

    const double f0 = penalized_nll(x, y, beta);
    double step = 1.0;
    while (step > 1e-12 && penalized_nll(x, y, beta + step * dir) > f0) step *= 0.5;
    beta += step * dir;
  }

  LogisticModel lr;
  lr.beta.assign(beta.data(), beta.data() + beta.size());
  return {ClassifierKind::Logistic, data.feature_names, std::move(lr)};
}

double logistic_score(const LogisticModel& lr, std::span<const double> x) {
  double z = lr.beta[0];
  for (size_t j = 0; j < x.size(); ++j) z += lr.beta[j + 1] * x[j];
  return sigmoid(z);
}

}  // namespace eegcx
