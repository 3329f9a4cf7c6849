#include "eegcx/types.hpp"

#include <cstdio>

namespace eegcx {

const std::vector<std::string>& standard_montage_19() {
  static const std::vector<std::string> montage = {
      "Fp1", "Fp2", "F3", "F4", "F7", "F8", "Fz", "C3", "C4", "Cz",
      "P3",  "P4",  "Pz", "T3", "T4", "T5", "T6", "O1", "O2"};
  return montage;
}

std::vector<std::string> montage_labels(size_t n_channels) {
  const auto& base = standard_montage_19();
  std::vector<std::string> labels;
  labels.reserve(n_channels);
  for (size_t i = 0; i < n_channels; ++i) {
    if (i < base.size()) {
      labels.push_back(base[i]);
    } else {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "Ch%zu", i + 1);
      labels.emplace_back(buf);
    }
  }
  return labels;
}

}  // namespace eegcx
