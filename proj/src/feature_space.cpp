#include "eegcx/feature_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <Eigen/Dense>

#include "eegcx/errors.hpp"

namespace eegcx {

namespace {

void require_columns_match(const std::vector<std::string>& expected,
                           const std::vector<std::string>& got, const char* who) {
  if (expected != got) {
    throw ConfigError(std::string(who) + ": feature names/order do not match the fitted model");
  }
}

void require_finite(const FeatureMatrix& matrix, const char* who) {
  for (size_t i = 0; i < matrix.rows.size(); ++i) {
    if (matrix.rows[i].size() != matrix.feature_names.size()) {
      throw ConfigError(std::string(who) + ": row " + std::to_string(i) + " width mismatch");
    }
    for (double v : matrix.rows[i]) {
      if (!std::isfinite(v)) {
        throw NumericError(std::string(who) + ": non-finite value in row " + std::to_string(i));
      }
    }
  }
}

}  // namespace

Scaler fit_scaler(const FeatureMatrix& matrix) {
  if (matrix.n_rows() < 2) throw ConfigError("fit_scaler: need at least 2 rows");
  require_finite(matrix, "fit_scaler");

  const size_t k = matrix.n_cols();
  const size_t n = matrix.n_rows();
  Scaler scaler;
  scaler.feature_names = matrix.feature_names;
  scaler.means.assign(k, 0.0);
  scaler.sds.assign(k, 0.0);

  for (size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += matrix.rows[i][c];
    mean /= static_cast<double>(n);
    double sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = matrix.rows[i][c] - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      throw NumericError("fit_scaler: zero-variance feature \"" + matrix.feature_names[c] + "\"");
    }
    scaler.means[c] = mean;
    scaler.sds[c] = sd;
  }
  return scaler;
}

FeatureMatrix apply_scaler(const Scaler& scaler, const FeatureMatrix& matrix) {
  require_columns_match(scaler.feature_names, matrix.feature_names, "apply_scaler");
  require_finite(matrix, "apply_scaler");

  FeatureMatrix out;
  out.feature_names = matrix.feature_names;
  out.meta = matrix.meta;
  out.rows = matrix.rows;
  for (auto& row : out.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      row[c] = (row[c] - scaler.means[c]) / scaler.sds[c];
    }
  }
  return out;
}

PcaModel fit_pca(const FeatureMatrix& matrix) {
  const size_t n = matrix.n_rows();
  const size_t k = matrix.n_cols();
  if (n < 2) throw ConfigError("fit_pca: need at least 2 rows");
  if (k < 1) throw ConfigError("fit_pca: need at least 1 column");
  require_finite(matrix, "fit_pca");

  Eigen::MatrixXd x(n, k);
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < k; ++c) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = matrix.rows[i][c];
  }
  const Eigen::RowVectorXd means = x.colwise().mean();
  x.rowwise() -= means;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("fit_pca: eigendecomposition failed");
  const Eigen::VectorXd evals = solver.eigenvalues();   // ascending
  const Eigen::MatrixXd evecs = solver.eigenvectors();

  // Per-component dominant loading (largest |entry|, lowest index on ties);
  // it pins the sign and breaks exact eigenvalue ties.
  std::vector<size_t> dominant(k);
  for (size_t c = 0; c < k; ++c) {
    size_t best = 0;
    for (size_t rix = 1; rix < k; ++rix) {
      if (std::abs(evecs(static_cast<Eigen::Index>(rix), static_cast<Eigen::Index>(c))) >
          std::abs(evecs(static_cast<Eigen::Index>(best), static_cast<Eigen::Index>(c)))) {
        best = rix;
      }
    }
    dominant[c] = best;
  }

  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double la = evals(static_cast<Eigen::Index>(a));
    const double lb = evals(static_cast<Eigen::Index>(b));
    if (la != lb) return la > lb;
    return dominant[a] < dominant[b];
  });

  PcaModel model;
  model.feature_names = matrix.feature_names;
  model.means.assign(means.data(), means.data() + k);
  model.eigenvalues.resize(k);
  model.eigenvectors.assign(k, std::vector<double>(k, 0.0));
  for (size_t c = 0; c < k; ++c) {
    const auto src = static_cast<Eigen::Index>(order[c]);
    double lambda = evals(src);
    if (lambda < 0.0) lambda = 0.0;  // numerical noise on rank-deficient input
    model.eigenvalues[c] = lambda;
    const double sign = evecs(static_cast<Eigen::Index>(dominant[order[c]]), src) < 0.0 ? -1.0 : 1.0;
    for (size_t rix = 0; rix < k; ++rix) {
      model.eigenvectors[c][rix] = sign * evecs(static_cast<Eigen::Index>(rix), src);
    }
  }
  return model;
}

FeatureMatrix project(const PcaModel& pca, const FeatureMatrix& matrix, size_t m) {
  const size_t k = pca.feature_names.size();
  if (m < 1 || m > k) {
    throw ConfigError("project: m = " + std::to_string(m) + " must lie in [1, " +
                      std::to_string(k) + "]");
  }
  require_columns_match(pca.feature_names, matrix.feature_names, "project");
  require_finite(matrix, "project");

  FeatureMatrix out;
  out.meta = matrix.meta;
  out.feature_names.reserve(m);
  for (size_t c = 0; c < m; ++c) out.feature_names.push_back("PC" + std::to_string(c + 1));
  out.rows.assign(matrix.n_rows(), std::vector<double>(m, 0.0));
  for (size_t i = 0; i < matrix.n_rows(); ++i) {
    for (size_t c = 0; c < m; ++c) {
      double dot = 0.0;
      for (size_t f = 0; f < k; ++f) {
        dot += (matrix.rows[i][f] - pca.means[f]) * pca.eigenvectors[c][f];
      }
      out.rows[i][c] = dot;
    }
  }
  return out;
}

FeatureMatrix inverse_project(const PcaModel& pca, const FeatureMatrix& projected) {
  const size_t k = pca.feature_names.size();
  const size_t m = projected.n_cols();
  if (m > k) throw ConfigError("inverse_project: more components than features");

  FeatureMatrix out;
  out.meta = projected.meta;
  out.feature_names = pca.feature_names;
  out.rows.assign(projected.n_rows(), std::vector<double>(k, 0.0));
  for (size_t i = 0; i < projected.n_rows(); ++i) {
    for (size_t f = 0; f < k; ++f) {
      double v = pca.means[f];
      for (size_t c = 0; c < m; ++c) {
        v += projected.rows[i][c] * pca.eigenvectors[c][f];
      }
      out.rows[i][f] = v;
    }
  }
  return out;
}

double explained_variance(const PcaModel& pca, size_t m) {
  const size_t k = pca.eigenvalues.size();
  if (m < 1 || m > k) {
    throw ConfigError("explained_variance: m = " + std::to_string(m) + " must lie in [1, " +
                      std::to_string(k) + "]");
  }
  double total = 0.0;
  for (double v : pca.eigenvalues) total += v;
  if (!(total > 0.0)) throw NumericError("explained_variance: total variance is zero");
  if (m == k) return 100.0;  // by definition, independent of rounding
  double head = 0.0;
  for (size_t i = 0; i < m; ++i) head += pca.eigenvalues[i];
  return 100.0 * head / total;
}

void save_loadings(const std::filesystem::path& path, const PcaModel& pca, size_t m,
                   bool absolute_values) {
  const size_t k = pca.feature_names.size();
  if (m < 1 || m > k) throw ConfigError("save_loadings: m out of range");

  std::string out = "feature";
  for (size_t c = 0; c < m; ++c) out += ",PC" + std::to_string(c + 1);
  out.push_back('\n');
  char buf[40];
  for (size_t f = 0; f < k; ++f) {
    out += pca.feature_names[f];
    for (size_t c = 0; c < m; ++c) {
      const double v = absolute_values ? std::abs(pca.eigenvectors[c][f]) : pca.eigenvectors[c][f];
      const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
      out.push_back(',');
      out.append(buf, static_cast<size_t>(len));
    }
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace eegcx
