#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eegcx/types.hpp"

namespace eegcx {

// Per-feature z-score parameters (SD with divisor N-1). Fit and apply are
// separate so fold-test rows can never feed the statistics.
struct Scaler {
  std::vector<std::string> feature_names;
  std::vector<double> means;
  std::vector<double> sds;
};

// Eigendecomposition of the sample covariance of column-centered data.
// Columns of `eigenvectors` are sorted by descending eigenvalue; each
// column's largest-|loading| entry is positive, which pins the sign.
struct PcaModel {
  std::vector<std::string> feature_names;
  std::vector<double> means;                       // column means of the fit data
  std::vector<std::vector<double>> eigenvectors;   // eigenvectors[component][feature]
  std::vector<double> eigenvalues;                 // descending, zeros kept
};

Scaler fit_scaler(const FeatureMatrix& matrix);
FeatureMatrix apply_scaler(const Scaler& scaler, const FeatureMatrix& matrix);

PcaModel fit_pca(const FeatureMatrix& matrix);

// Centered data times the first m eigenvectors; output columns PC1..PCm.
FeatureMatrix project(const PcaModel& pca, const FeatureMatrix& matrix, size_t m);

// Inverse of project for m components: loadings transpose plus the means.
FeatureMatrix inverse_project(const PcaModel& pca, const FeatureMatrix& projected);

// 100 * sum of the first m eigenvalues over the total.
double explained_variance(const PcaModel& pca, size_t m);

// Loadings CSV: rows = original feature names, columns = PC1..PCm. The
// absolute-value variant writes |loading|.
void save_loadings(const std::filesystem::path& path, const PcaModel& pca, size_t m,
                   bool absolute_values);

}  // namespace eegcx
