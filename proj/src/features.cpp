#include "eegcx/features.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <string>
#include <thread>

#include "eegcx/errors.hpp"

namespace eegcx {

namespace {

double population_sd(std::span<const double> x) {
  const size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double sq = 0.0;
  for (double v : x) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(n));
}

bool is_constant(std::span<const double> x) {
  for (double v : x) {
    if (v != x[0]) return false;
  }
  return true;
}

}  // namespace

double higuchi_fd(std::span<const double> series, const HfdParams& params) {
  const size_t n = series.size();
  const size_t k_max = params.k_max;
  if (k_max < 2) throw ConfigError("higuchi_fd: k_max must be >= 2");
  if (n < 4 * k_max) {
    throw ConfigError("higuchi_fd: series length " + std::to_string(n) +
                      " is shorter than 4*k_max = " + std::to_string(4 * k_max));
  }
  if (is_constant(series)) throw NumericError("higuchi_fd: constant series");

  std::vector<double> log_len(k_max);
  std::vector<double> log_inv_k(k_max);
  for (size_t k = 1; k <= k_max; ++k) {
    double sum_lm = 0.0;
    for (size_t m = 1; m <= k; ++m) {
      const size_t n_i = (n - m) / k;
      double len = 0.0;
      for (size_t i = 1; i <= n_i; ++i) {
        len += std::abs(series[m - 1 + i * k] - series[m - 1 + (i - 1) * k]);
      }
      sum_lm += len * static_cast<double>(n - 1) /
                (static_cast<double>(n_i) * static_cast<double>(k) * static_cast<double>(k));
    }
    const double lk = sum_lm / static_cast<double>(k);
    if (!(lk > 0.0)) {
      throw NumericError("higuchi_fd: curve length vanished at scale k=" + std::to_string(k));
    }
    log_len[k - 1] = std::log(lk);
    log_inv_k[k - 1] = -std::log(static_cast<double>(k));
  }

  // OLS slope with a fixed summation order.
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < k_max; ++i) {
    mx += log_inv_k[i];
    my += log_len[i];
  }
  mx /= static_cast<double>(k_max);
  my /= static_cast<double>(k_max);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < k_max; ++i) {
    sxy += (log_inv_k[i] - mx) * (log_len[i] - my);
    sxx += (log_inv_k[i] - mx) * (log_inv_k[i] - mx);
  }
  double fd = sxy / sxx;

  if (fd < 1.0 || fd > 2.0) {
    if (fd < 1.0 - 0.05 || fd > 2.0 + 0.05) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", fd);
      throw NumericError(std::string("higuchi_fd: estimate ") + buf + " is outside [1,2]");
    }
    fd = std::clamp(fd, 1.0, 2.0);
  }
  return fd;
}

SampEnCounts sample_entropy_counts(std::span<const double> series, const SampEnParams& params) {
  const size_t n = series.size();
  const size_t m = params.m;
  if (m < 1) throw ConfigError("sample_entropy: m must be >= 1");
  if (!(params.r_factor > 0.0)) throw ConfigError("sample_entropy: r_factor must be > 0");
  if (n < 100) throw ConfigError("sample_entropy: series length must be >= 100");
  if (n < m + 2) throw ConfigError("sample_entropy: series too short for m");

  const double sd = population_sd(series);
  if (!(sd > 0.0)) throw NumericError("sample_entropy: zero standard deviation");
  const double r = params.r_factor * sd;

  // Both lengths are counted over the same N-m template starting points, so
  // one pass over pairs covers A and B; prefix mismatches abort early and
  // the counts are identical to the naive double loop.
  SampEnCounts counts;
  const size_t n_templates = n - m;
  for (size_t i = 0; i < n_templates; ++i) {
    for (size_t j = i + 1; j < n_templates; ++j) {
      bool match = true;
      for (size_t t = 0; t < m; ++t) {
        if (std::abs(series[i + t] - series[j + t]) > r) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      ++counts.template_matches;
      if (std::abs(series[i + m] - series[j + m]) <= r) ++counts.extended_matches;
    }
  }
  return counts;
}

double sample_entropy(std::span<const double> series, const SampEnParams& params) {
  const auto counts = sample_entropy_counts(series, params);
  if (counts.template_matches == 0) {
    throw NumericError("sample_entropy: no template matches at length m (B = 0)");
  }
  if (counts.extended_matches == 0) {
    throw NumericError("sample_entropy: no template matches at length m+1 (A = 0)");
  }
  return -std::log(static_cast<double>(counts.extended_matches) /
                   static_cast<double>(counts.template_matches));
}

FeatureMatrix build_feature_matrix(const std::vector<Recording>& instances, const HfdParams& hfd,
                                   const SampEnParams& se, size_t n_threads) {
  if (instances.empty()) throw ConfigError("build_feature_matrix: no instances");
  const auto& ref = instances.front();
  for (const auto& rec : instances) {
    if (rec.n_channels() != ref.n_channels()) {
      throw DataError("build_feature_matrix: instance " + rec.subject_id +
                      " has a different channel count");
    }
    for (size_t c = 0; c < ref.n_channels(); ++c) {
      if (rec.channels[c].label != ref.channels[c].label) {
        throw DataError("build_feature_matrix: instance " + rec.subject_id +
                        " channel order differs at position " + std::to_string(c));
      }
    }
  }

  const size_t n_ch = ref.n_channels();
  FeatureMatrix matrix;
  matrix.feature_names.reserve(2 * n_ch);
  for (size_t c = 0; c < n_ch; ++c) matrix.feature_names.push_back("HFD:" + ref.channels[c].label);
  for (size_t c = 0; c < n_ch; ++c) matrix.feature_names.push_back("SampEn:" + ref.channels[c].label);

  matrix.rows.assign(instances.size(), std::vector<double>(2 * n_ch, 0.0));
  matrix.meta.resize(instances.size());

  auto compute_instance = [&](size_t idx) {
    const auto& rec = instances[idx];
    auto& row = matrix.rows[idx];
    for (size_t c = 0; c < n_ch; ++c) {
      const auto& ch = rec.channels[c];
      try {
        row[c] = higuchi_fd(ch.samples, hfd);
        row[n_ch + c] = sample_entropy(ch.samples, se);
      } catch (const std::exception& e) {
        throw NumericError("feature extraction failed for subject " + rec.subject_id +
                           ", channel " + ch.label + ": " + e.what());
      }
    }
    matrix.meta[idx] = {rec.subject_id, rec.class_label};
  };

  size_t workers = n_threads == 0 ? std::max<size_t>(1, std::thread::hardware_concurrency()) : n_threads;
  workers = std::min(workers, instances.size());
  if (workers <= 1) {
    for (size_t i = 0; i < instances.size(); ++i) compute_instance(i);
  } else {
    // Instances are independent; a shared atomic index hands them out and
    // results land in preallocated slots, so the output is order-free.
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (size_t i = next.fetch_add(1); i < instances.size(); i = next.fetch_add(1)) {
          compute_instance(i);
        }
      }));
    }
    std::exception_ptr first_error;
    for (auto& f : futures) {
      try {
        f.get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }
  return matrix;
}

void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  std::string out = "subject_id,label";
  for (const auto& name : matrix.feature_names) {
    out.push_back(',');
    out += name;
  }
  out.push_back('\n');
  char buf[40];
  for (size_t i = 0; i < matrix.rows.size(); ++i) {
    out += matrix.meta[i].subject_id;
    out.push_back(',');
    out += to_string(matrix.meta[i].label);
    for (double v : matrix.rows[i]) {
      out.push_back(',');
      const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
      out.append(buf, static_cast<size_t>(len));
    }
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write failed for " + path.string());
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("feature csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature csv: empty file " + path.string());
  while (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        header.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    header.push_back(cur);
  }
  if (header.size() < 3 || header[0] != "subject_id" || header[1] != "label") {
    throw DataError("feature csv: header must start with subject_id,label in " + path.string());
  }

  FeatureMatrix matrix;
  matrix.feature_names.assign(header.begin() + 2, header.end());
  size_t row_no = 0;
  while (std::getline(in, line)) {
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_no;
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    if (cells.size() != header.size()) {
      throw DataError("feature csv: row " + std::to_string(row_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    InstanceMeta meta;
    meta.subject_id = cells[0];
    if (cells[1] == "patient") {
      meta.label = ClassLabel::Patient;
    } else if (cells[1] == "control") {
      meta.label = ClassLabel::Control;
    } else {
      throw DataError("feature csv: row " + std::to_string(row_no) +
                      " label must be patient or control, got \"" + cells[1] + "\"");
    }
    std::vector<double> row(cells.size() - 2);
    for (size_t c = 2; c < cells.size(); ++c) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), value);
      if (ec != std::errc() || ptr != cells[c].data() + cells[c].size() || cells[c].empty()) {
        throw DataError("feature csv: non-numeric cell at row " + std::to_string(row_no) +
                        ", column " + std::to_string(c + 1));
      }
      if (!std::isfinite(value)) {
        throw DataError("feature csv: non-finite value at row " + std::to_string(row_no));
      }
      row[c - 2] = value;
    }
    matrix.rows.push_back(std::move(row));
    matrix.meta.push_back(std::move(meta));
  }
  if (matrix.rows.empty()) throw DataError("feature csv: no rows in " + path.string());
  return matrix;
}

}  // namespace eegcx
