#include <cmath>
#include <cstdlib>
#include <vector>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"
#include "family_scores.hpp"

namespace eegcx {

namespace {

constexpr double kC = 1.0;
constexpr double kKktTol = 1e-3;
constexpr double kAlphaClip = 1e-12;
constexpr double kStepEps = 1e-8;
constexpr size_t kMaxPasses = 1000000;

double kernel_eval(SvmKernel kernel, std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  for (size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
  return kernel == SvmKernel::Linear ? dot : dot * dot;
}

// Platt's SMO with an incrementally maintained error cache. Iteration order
// is fixed, so training is fully deterministic.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
            SvmKernel kernel)
      : rows_(rows), y_(y), n_(rows.size()), alpha_(n_, 0.0), errors_(n_) {
    gram_.resize(n_ * n_);
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = i; j < n_; ++j) {
        const double kij = kernel_eval(kernel, rows_[i], rows_[j]);
        gram_[i * n_ + j] = kij;
        gram_[j * n_ + i] = kij;
      }
    }
    for (size_t i = 0; i < n_; ++i) errors_[i] = -y_[i];  // u = 0 initially
  }

  std::vector<double> solve() {
    size_t num_changed = 0;
    bool examine_all = true;
    size_t passes = 0;
    while (num_changed > 0 || examine_all) {
      if (++passes > kMaxPasses) {
        throw TrainingError("train_svm: SMO failed to converge within the pass budget");
      }
      num_changed = 0;
      if (examine_all) {
        for (size_t i = 0; i < n_; ++i) num_changed += examine(i);
      } else {
        for (size_t i = 0; i < n_; ++i) {
          if (alpha_[i] > kAlphaClip && alpha_[i] < kC - kAlphaClip) num_changed += examine(i);
        }
      }
      if (examine_all) {
        examine_all = false;
      } else if (num_changed == 0) {
        examine_all = true;
      }
    }
    for (auto& a : alpha_) {
      if (a < kAlphaClip) a = 0.0;
      if (a > kC - kAlphaClip) a = kC;
    }
    return alpha_;
  }

 private:
  double k(size_t i, size_t j) const { return gram_[i * n_ + j]; }

  size_t examine(size_t i2) {
    const double y2 = y_[i2];
    const double a2 = alpha_[i2];
    const double e2 = errors_[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -kKktTol && a2 < kC) || (r2 > kKktTol && a2 > 0.0))) return 0;

    // Second-choice heuristic: largest |E1 - E2| over non-bound points.
    size_t best = n_;
    double best_gap = -1.0;
    for (size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > kAlphaClip && alpha_[i] < kC - kAlphaClip) {
        const double gap = std::abs(errors_[i] - e2);
        if (gap > best_gap) {
          best_gap = gap;
          best = i;
        }
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;
    for (size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > kAlphaClip && alpha_[i] < kC - kAlphaClip && take_step(i, i2)) return 1;
    }
    for (size_t i = 0; i < n_; ++i) {
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(size_t i1, size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = errors_[i1], e2 = errors_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(kC, kC + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - kC);
      hi = std::min(kC, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + y2 * (e1 - e2) / eta;
      a2_new = std::min(std::max(a2_new, lo), hi);
    } else {
      // Degenerate curvature: evaluate the objective at both clip ends.
      const double f1 = y1 * (e1 + b_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + b_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo =
          l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi =
          h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - kStepEps) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + kStepEps) {
        a2_new = hi;
      } else {
        a2_new = a2;
      }
    }
    if (std::abs(a2_new - a2) < kStepEps * (a2_new + a2 + kStepEps)) return false;
    const double a1_new = a1 + s * (a2 - a2_new);

    // Threshold update (Platt's b1/b2 rules); u_i = sum alpha_j y_j K_ij - b.
    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    const double b1 = e1 + d1 * k11 + d2 * k12 + b_;
    const double b2 = e2 + d1 * k12 + d2 * k22 + b_;
    const double b_old = b_;
    if (a1_new > kAlphaClip && a1_new < kC - kAlphaClip) {
      b_ = b1;
    } else if (a2_new > kAlphaClip && a2_new < kC - kAlphaClip) {
      b_ = b2;
    } else {
      b_ = 0.5 * (b1 + b2);
    }

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    for (size_t i = 0; i < n_; ++i) {
      errors_[i] += d1 * k(i1, i) + d2 * k(i2, i) + b_old - b_;
    }
    return true;
  }

  const std::vector<std::vector<double>>& rows_;
  const std::vector<double>& y_;
  size_t n_;
  double b_{0.0};
  std::vector<double> alpha_;
  std::vector<double> errors_;
  std::vector<double> gram_;
};

}  // namespace

TrainedModel train_svm(const LabeledDataset& data, SvmKernel kernel) {
  const size_t n = data.rows.size();
  if (n < 2) throw TrainingError("train_svm: need at least 2 examples");

  std::vector<double> y(n);
  bool has_patient = false, has_control = false;
  for (size_t i = 0; i < n; ++i) {
    y[i] = data.labels[i] == ClassLabel::Patient ? 1.0 : -1.0;
    (y[i] > 0 ? has_patient : has_control) = true;
  }
  if (!has_patient || !has_control) throw TrainingError("train_svm: both classes must be present");

  SmoSolver solver(data.rows, y, kernel);
  const auto alpha = solver.solve();

  SvmModel svm;
  svm.kernel = kernel;
  for (size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      svm.support_vectors.push_back(data.rows[i]);
      svm.alpha.push_back(alpha[i]);
      svm.sv_labels.push_back(y[i]);
    }
  }

  // Bias as the support-vector average of c_i - sum_j alpha_j c_j K(x_j, x_i).
  const size_t ns = svm.support_vectors.size();
  if (ns > 0) {
    double b = 0.0;
    for (size_t i = 0; i < ns; ++i) {
      double u = 0.0;
      for (size_t j = 0; j < ns; ++j) {
        u += svm.alpha[j] * svm.sv_labels[j] *
             kernel_eval(kernel, svm.support_vectors[j], svm.support_vectors[i]);
      }
      b += svm.sv_labels[i] - u;
    }
    svm.bias = b / static_cast<double>(ns);
  }

  return {kernel == SvmKernel::Linear ? ClassifierKind::SvmLinear : ClassifierKind::SvmPoly2,
          data.feature_names, std::move(svm)};
}

double svm_decision(const SvmModel& svm, std::span<const double> x) {
  double u = svm.bias;
  for (size_t i = 0; i < svm.support_vectors.size(); ++i) {
    u += svm.alpha[i] * svm.sv_labels[i] * kernel_eval(svm.kernel, svm.support_vectors[i], x);
  }
  return u;
}

}  // namespace eegcx
