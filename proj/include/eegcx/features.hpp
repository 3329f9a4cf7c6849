#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eegcx/types.hpp"

namespace eegcx {

struct HfdParams {
  size_t k_max{8};
};

struct SampEnParams {
  size_t m{2};
  double r_factor{0.15};  // tolerance r = r_factor * SD(series)
};

// Higuchi fractal dimension: slope of ln L(k) against ln(1/k) over
// k = 1..k_max, where L(k) averages the normalized curve lengths
// L_m(k) = (N-1) / (floor((N-m)/k) * k^2) * sum |x(m+ik) - x(m+(i-1)k|.
// Results a hair outside [1,2] are clamped; further out is an error.
double higuchi_fd(std::span<const double> series, const HfdParams& params = {});

struct SampEnCounts {
  uint64_t template_matches{0};   // B: pairs matching at length m
  uint64_t extended_matches{0};   // A: pairs matching at length m+1
};

// Template-pair match counts with Chebyshev distance, self-matches excluded,
// pairs i < j counted once, both lengths over the same N-m starting points.
SampEnCounts sample_entropy_counts(std::span<const double> series, const SampEnParams& params = {});

// -ln(A/B) with r = r_factor * population SD of the series.
double sample_entropy(std::span<const double> series, const SampEnParams& params = {});

// One row per instance; all HFD features in channel order, then all SampEn
// features in channel order. Per-channel failures abort with subject/channel
// context. n_threads = 0 picks the hardware concurrency.
FeatureMatrix build_feature_matrix(const std::vector<Recording>& instances,
                                   const HfdParams& hfd = {}, const SampEnParams& se = {},
                                   size_t n_threads = 0);

// CSV with header "subject_id,label,<feature names...>", >= 15 significant
// digits per value.
void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& matrix);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

}  // namespace eegcx
