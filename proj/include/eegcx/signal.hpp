#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegcx/types.hpp"

namespace eegcx {

// Fractional Gaussian noise with Hurst exponent `hurst`, unit variance and
// zero mean, generated by circulant embedding (exact covariance). Handles
// arbitrary n by embedding the next power of two and truncating. The
// cumulative sum is fractional Brownian motion with fractal dimension
// 2 - hurst. Deterministic per seed.
std::vector<double> gen_fgn(size_t n, double hurst, uint64_t seed);

// Logistic map iterates x_{k+1} = r*x_k*(1-x_k) after a 1000-step burn-in.
std::vector<double> gen_logistic_map(size_t n, double r, double x0);

// Synthetic cohort: per subject/channel an independent fBm epoch at the
// class's Hurst parameter, optionally blended with white noise. Patients
// come first, then controls. Deterministic per spec.seed.
std::vector<Recording> synth_cohort(const CohortSpec& spec);

struct ManifestEntry {
  std::string file;
  std::string subject_id;
  ClassLabel label{ClassLabel::Control};
  double sampling_rate_hz{0.0};
};

// Channel CSV: header of channel labels, one sample per channel per line.
Recording load_recording(const std::filesystem::path& path, const ManifestEntry& entry);
void save_recording(const std::filesystem::path& path, const Recording& rec);

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

// Non-overlapping consecutive windows from the start, up to max_epochs.
// Each epoch inherits subject_id and class_label.
std::vector<Recording> epoch(const Recording& recording, size_t epoch_samples, size_t max_epochs);

void validate(const CohortSpec& spec);
void validate(const Recording& rec);

}  // namespace eegcx
