#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eegcx {

enum class ClassLabel { Patient, Control };

inline const char* to_string(ClassLabel c) {
  return c == ClassLabel::Patient ? "patient" : "control";
}

struct Channel {
  std::string label;
  std::vector<double> samples;
};

// One multichannel recording (or one epoch cut from it). All channels carry
// the same number of samples; labels are unique within a recording.
struct Recording {
  std::string subject_id;
  ClassLabel class_label{ClassLabel::Control};
  double sampling_rate_hz{0.0};
  std::vector<Channel> channels;

  size_t n_channels() const { return channels.size(); }
  size_t n_samples() const { return channels.empty() ? 0 : channels[0].samples.size(); }
  double duration_s() const {
    return sampling_rate_hz > 0.0 ? static_cast<double>(n_samples()) / sampling_rate_hz : 0.0;
  }
};

struct CohortSpec {
  size_t n_patients{14};
  size_t n_controls{20};
  size_t channels{19};
  size_t epoch_samples{10000};
  uint64_t seed{0};
  double patient_hurst{0.3};
  double control_hurst{0.7};
  double noise_mix{0.0};
  double sampling_rate_hz{1000.0};
};

struct InstanceMeta {
  std::string subject_id;
  ClassLabel label{ClassLabel::Control};
};

// Instances x named features, with per-row subject/class metadata.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<InstanceMeta> meta;

  size_t n_rows() const { return rows.size(); }
  size_t n_cols() const { return feature_names.size(); }
};

// Plain training view consumed by the classifiers.
struct LabeledDataset {
  std::vector<std::vector<double>> rows;
  std::vector<ClassLabel> labels;
  std::vector<std::string> feature_names;

  size_t n_rows() const { return rows.size(); }
  size_t n_cols() const { return feature_names.size(); }
};

// The default 19-electrode montage, frontal to occipital.
const std::vector<std::string>& standard_montage_19();

// Montage labels for an arbitrary channel count: the 19 standard labels,
// extended with Ch20, Ch21, ... when more are requested.
std::vector<std::string> montage_labels(size_t n_channels);

}  // namespace eegcx
