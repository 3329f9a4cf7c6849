#include "eegcx/signal.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eegcx/errors.hpp"
#include "eegcx/rng.hpp"

namespace eegcx {

namespace {

// Iterative radix-2 FFT; size must be a power of two. Only used by the
// circulant embedding below, where sizes are powers of two by construction.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

// fGn autocovariance gamma(k) for unit-variance increments.
double fgn_autocov(size_t k, double hurst) {
  if (k == 0) return 1.0;
  const double h2 = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + std::pow(kd - 1.0, h2));
}

double parse_double_token(const std::string& tok, size_t row, size_t col) {
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw DataError("channel csv: non-numeric cell at row " + std::to_string(row) +
                    ", column " + std::to_string(col));
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

void write_double(std::string& out, double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<size_t>(len));
}

}  // namespace

void validate(const CohortSpec& spec) {
  if (spec.n_patients < 1 || spec.n_controls < 1) {
    throw ConfigError("cohort spec: group counts must be >= 1");
  }
  if (spec.epoch_samples < 100) {
    throw ConfigError("cohort spec: epoch_samples must be >= 100");
  }
  if (spec.channels < 1) {
    throw ConfigError("cohort spec: channels must be >= 1");
  }
  if (!(spec.patient_hurst > 0.0 && spec.patient_hurst < 1.0) ||
      !(spec.control_hurst > 0.0 && spec.control_hurst < 1.0)) {
    throw ConfigError("cohort spec: hurst values must lie in the open interval (0,1)");
  }
  if (!(spec.noise_mix >= 0.0 && spec.noise_mix <= 1.0)) {
    throw ConfigError("cohort spec: noise_mix must lie in [0,1]");
  }
  if (!(spec.sampling_rate_hz > 0.0)) {
    throw ConfigError("cohort spec: sampling_rate_hz must be positive");
  }
}

void validate(const Recording& rec) {
  if (rec.channels.empty()) throw DataError("recording " + rec.subject_id + ": no channels");
  const size_t n = rec.channels[0].samples.size();
  if (n < 100) throw DataError("recording " + rec.subject_id + ": channels shorter than 100 samples");
  for (const auto& ch : rec.channels) {
    if (ch.samples.size() != n) {
      throw DataError("recording " + rec.subject_id + ": channel sample counts differ");
    }
  }
  for (size_t i = 0; i < rec.channels.size(); ++i) {
    for (size_t j = i + 1; j < rec.channels.size(); ++j) {
      if (rec.channels[i].label == rec.channels[j].label) {
        throw DataError("recording " + rec.subject_id + ": duplicate channel label " +
                        rec.channels[i].label);
      }
    }
  }
  if (!(rec.sampling_rate_hz > 0.0)) {
    throw DataError("recording " + rec.subject_id + ": sampling rate must be positive");
  }
}

std::vector<double> gen_fgn(size_t n, double hurst, uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw ConfigError("gen_fgn: hurst must lie in the open interval (0,1)");
  }
  if (n < 2) throw ConfigError("gen_fgn: n must be >= 2");

  // Davies-Harte: embed the covariance into a circulant of size 2m, m a
  // power of two >= n. Eigenvalues of the circulant are the FFT of the
  // first row and are nonnegative for fGn.
  const size_t m = std::bit_ceil(n);
  const size_t M = 2 * m;

  std::vector<std::complex<double>> eig(M);
  for (size_t k = 0; k <= m; ++k) eig[k] = fgn_autocov(k, hurst);
  for (size_t k = 1; k < m; ++k) eig[M - k] = eig[k];
  fft_inplace(eig, false);

  rng::Engine eng(seed);
  std::vector<std::complex<double>> w(M);
  auto lambda = [&](size_t j) {
    double v = eig[j].real();
    if (v < 0.0) {
      if (v < -1e-8) throw NumericError("gen_fgn: circulant embedding produced a negative eigenvalue");
      v = 0.0;
    }
    return v;
  };
  w[0] = std::sqrt(lambda(0)) * eng.normal();
  w[m] = std::sqrt(lambda(m)) * eng.normal();
  for (size_t j = 1; j < m; ++j) {
    const double sd = std::sqrt(lambda(j) / 2.0);
    const double re = sd * eng.normal();
    const double im = sd * eng.normal();
    w[j] = {re, im};
    w[M - j] = {re, -im};
  }
  fft_inplace(w, false);

  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  std::vector<double> out(n);
  for (size_t t = 0; t < n; ++t) out[t] = w[t].real() * scale;
  return out;
}

std::vector<double> gen_logistic_map(size_t n, double r, double x0) {
  if (!(x0 > 0.0 && x0 < 1.0)) {
    throw ConfigError("gen_logistic_map: x0 must lie in the open interval (0,1)");
  }
  if (!(r >= 3.0 && r <= 4.0)) {
    throw ConfigError("gen_logistic_map: r must lie in [3,4]");
  }
  if (n < 100) throw ConfigError("gen_logistic_map: n must be >= 100");

  double x = x0;
  for (int i = 0; i < 1000; ++i) x = r * x * (1.0 - x);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    x = r * x * (1.0 - x);
    out[i] = x;
  }
  return out;
}

std::vector<Recording> synth_cohort(const CohortSpec& spec) {
  validate(spec);
  const auto labels = montage_labels(spec.channels);
  std::vector<Recording> cohort;
  cohort.reserve(spec.n_patients + spec.n_controls);

  const size_t total = spec.n_patients + spec.n_controls;
  for (size_t s = 0; s < total; ++s) {
    const bool is_patient = s < spec.n_patients;
    Recording rec;
    char id[28];
    if (is_patient) {
      std::snprintf(id, sizeof(id), "P%02zu", s + 1);
    } else {
      std::snprintf(id, sizeof(id), "C%02zu", s - spec.n_patients + 1);
    }
    rec.subject_id = id;
    rec.class_label = is_patient ? ClassLabel::Patient : ClassLabel::Control;
    rec.sampling_rate_hz = spec.sampling_rate_hz;
    rec.channels.resize(spec.channels);

    const double hurst = is_patient ? spec.patient_hurst : spec.control_hurst;
    for (size_t c = 0; c < spec.channels; ++c) {
      const uint64_t ch_seed = rng::mix_seed(spec.seed, s, c);
      auto increments = gen_fgn(spec.epoch_samples, hurst, ch_seed);
      std::vector<double> fbm(spec.epoch_samples);
      double acc = 0.0;
      for (size_t t = 0; t < spec.epoch_samples; ++t) {
        acc += increments[t];
        fbm[t] = acc;
      }
      if (spec.noise_mix > 0.0) {
        // Blend unit-variance fBm with unit-variance white noise.
        double mean = 0.0, sq = 0.0;
        for (double v : fbm) mean += v;
        mean /= static_cast<double>(fbm.size());
        for (double v : fbm) sq += (v - mean) * (v - mean);
        const double sd = std::sqrt(sq / static_cast<double>(fbm.size()));
        rng::Engine noise(rng::mix_seed(spec.seed, s, c, 1));
        for (auto& v : fbm) {
          const double base = sd > 0.0 ? (v - mean) / sd : 0.0;
          v = (1.0 - spec.noise_mix) * base + spec.noise_mix * noise.normal();
        }
      }
      rec.channels[c].label = labels[c];
      rec.channels[c].samples = std::move(fbm);
    }
    cohort.push_back(std::move(rec));
  }
  return cohort;
}

Recording load_recording(const std::filesystem::path& path, const ManifestEntry& entry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("channel csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError("channel csv: empty file " + path.string());
  auto header = split_csv_line(line);
  if (header.empty() || (header.size() == 1 && header[0].empty())) {
    throw DataError("channel csv: missing header in " + path.string());
  }

  Recording rec;
  rec.subject_id = entry.subject_id;
  rec.class_label = entry.label;
  rec.sampling_rate_hz = entry.sampling_rate_hz;
  rec.channels.resize(header.size());
  for (size_t c = 0; c < header.size(); ++c) rec.channels[c].label = header[c];

  size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError("channel csv: row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()) + " in " + path.string());
    }
    for (size_t c = 0; c < cells.size(); ++c) {
      rec.channels[c].samples.push_back(parse_double_token(cells[c], row, c + 1));
    }
  }
  if (row == 0) throw DataError("channel csv: no samples in " + path.string());
  return rec;
}

void save_recording(const std::filesystem::path& path, const Recording& rec) {
  std::string out;
  for (size_t c = 0; c < rec.channels.size(); ++c) {
    if (c) out.push_back(',');
    out += rec.channels[c].label;
  }
  out.push_back('\n');
  const size_t n = rec.n_samples();
  for (size_t t = 0; t < n; ++t) {
    for (size_t c = 0; c < rec.channels.size(); ++c) {
      if (c) out.push_back(',');
      write_double(out, rec.channels[c].samples[t]);
    }
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write failed for " + path.string());
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("manifest: cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest: invalid json in " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw DataError("manifest: expected a json array in " + path.string());

  std::vector<ManifestEntry> entries;
  for (const auto& item : doc) {
    ManifestEntry e;
    try {
      e.file = item.at("file").get<std::string>();
      e.subject_id = item.at("subject_id").get<std::string>();
      const auto label = item.at("label").get<std::string>();
      if (label == "patient") {
        e.label = ClassLabel::Patient;
      } else if (label == "control") {
        e.label = ClassLabel::Control;
      } else {
        throw DataError("manifest: label must be \"patient\" or \"control\", got \"" + label + "\"");
      }
      e.sampling_rate_hz = item.at("sampling_rate_hz").get<double>();
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(std::string("manifest: malformed entry: ") + ex.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& e : entries) {
    doc.push_back({{"file", e.file},
                   {"subject_id", e.subject_id},
                   {"label", std::string(to_string(e.label))},
                   {"sampling_rate_hz", e.sampling_rate_hz}});
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << doc.dump(2) << "\n";
}

std::vector<Recording> epoch(const Recording& recording, size_t epoch_samples, size_t max_epochs) {
  if (epoch_samples < 100) throw ConfigError("epoch: epoch_samples must be >= 100");
  if (max_epochs < 1) throw ConfigError("epoch: max_epochs must be >= 1");
  const size_t n = recording.n_samples();
  if (n < epoch_samples) {
    throw DataError("epoch: recording " + recording.subject_id + " has " + std::to_string(n) +
                    " samples, shorter than one epoch of " + std::to_string(epoch_samples));
  }
  const size_t count = std::min(max_epochs, n / epoch_samples);
  std::vector<Recording> epochs;
  epochs.reserve(count);
  for (size_t e = 0; e < count; ++e) {
    Recording out;
    out.subject_id = recording.subject_id;
    out.class_label = recording.class_label;
    out.sampling_rate_hz = recording.sampling_rate_hz;
    out.channels.resize(recording.channels.size());
    for (size_t c = 0; c < recording.channels.size(); ++c) {
      const auto& src = recording.channels[c].samples;
      out.channels[c].label = recording.channels[c].label;
      out.channels[c].samples.assign(src.begin() + static_cast<std::ptrdiff_t>(e * epoch_samples),
                                     src.begin() + static_cast<std::ptrdiff_t>((e + 1) * epoch_samples));
    }
    epochs.push_back(std::move(out));
  }
  return epochs;
}

}  // namespace eegcx
