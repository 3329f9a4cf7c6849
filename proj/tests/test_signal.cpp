#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <future>
#include <thread>

#include "eegcx/errors.hpp"
#include "eegcx/features.hpp"
#include "eegcx/rng.hpp"
#include "eegcx/signal.hpp"
#include "oracles.hpp"

using namespace eegcx;
namespace fs = std::filesystem;

namespace {

double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / double(x.size());
}

double sample_sd(const std::vector<double>& x) {
  const double m = sample_mean(x);
  double sq = 0.0;
  for (double v : x) sq += (v - m) * (v - m);
  return std::sqrt(sq / double(x.size()));
}

double autocorr(const std::vector<double>& x, size_t lag) {
  const double m = sample_mean(x);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i + lag < x.size(); ++i) num += (x[i] - m) * (x[i + lag] - m);
  for (size_t i = 0; i < x.size(); ++i) den += (x[i] - m) * (x[i] - m);
  return num / den;
}

fs::path temp_dir(const char* tag) {
  auto dir = fs::temp_directory_path() / (std::string("eegcx_test_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("gen_fgn at H=0.5 is white noise") {
  const size_t n = 4096;
  const auto x = gen_fgn(n, 0.5, 1);
  REQUIRE(x.size() == n);
  CHECK(std::abs(autocorr(x, 1)) < 3.0 / std::sqrt(double(n)));
  for (size_t lag = 1; lag <= 5; ++lag) {
    CHECK(std::abs(autocorr(x, lag)) < 4.0 / std::sqrt(double(n)));
  }
  CHECK(std::abs(sample_mean(x)) < 4.0 * sample_sd(x) / std::sqrt(double(n)));
}

TEST_CASE("gen_fgn cumulative sum has fractal dimension 2 - H") {
  // Independent curve-length slope fit as the oracle.
  const auto high = oracles::cumsum(gen_fgn(1 << 14, 0.7, 7));
  CHECK(std::abs(oracles::higuchi_slope(high, 8) - 1.3) < 0.1);
  const auto low = oracles::cumsum(gen_fgn(1 << 14, 0.3, 7));
  CHECK(std::abs(oracles::higuchi_slope(low, 8) - 1.7) < 0.1);
}

TEST_CASE("gen_fgn is deterministic and handles arbitrary lengths") {
  const auto a = gen_fgn(5000, 0.6, 99);
  const auto b = gen_fgn(5000, 0.6, 99);
  REQUIRE(a.size() == 5000);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  CHECK(gen_fgn(2, 0.4, 0).size() == 2);
  CHECK(gen_fgn(4097, 0.4, 0).size() == 4097);
}

TEST_CASE("gen_fgn rejects invalid parameters") {
  CHECK_THROWS_AS(gen_fgn(100, 0.0, 0), ConfigError);
  CHECK_THROWS_AS(gen_fgn(100, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(gen_fgn(100, -0.2, 0), ConfigError);
  CHECK_THROWS_AS(gen_fgn(100, 1.7, 0), ConfigError);
  CHECK_THROWS_AS(gen_fgn(1, 0.5, 0), ConfigError);
}

TEST_CASE("gen_logistic_map regimes") {
  const auto periodic = gen_logistic_map(1000, 3.2, 0.4);
  REQUIRE(periodic.size() == 1000);
  // Period-2 alternation after burn-in.
  for (size_t i = 0; i + 2 < periodic.size(); ++i) {
    CHECK(periodic[i] == doctest::Approx(periodic[i + 2]).epsilon(1e-9));
  }
  const double sd_p = oracles::population_sd(periodic);
  const auto ref_p = oracles::sampen_naive(periodic, 2, 0.15 * sd_p);
  CHECK(ref_p.value() < 0.01);

  const auto chaotic = gen_logistic_map(5000, 4.0, 0.4);
  const double sd_c = oracles::population_sd(chaotic);
  const auto ref_c = oracles::sampen_naive(chaotic, 2, 0.15 * sd_c);
  CHECK(ref_c.value() > 0.4);
}

TEST_CASE("gen_logistic_map rejects bad parameters") {
  CHECK_THROWS_AS(gen_logistic_map(1000, 3.2, 0.0), ConfigError);
  CHECK_THROWS_AS(gen_logistic_map(1000, 3.2, 1.0), ConfigError);
  CHECK_THROWS_AS(gen_logistic_map(1000, 3.2, -0.5), ConfigError);
  CHECK_THROWS_AS(gen_logistic_map(1000, 2.5, 0.4), ConfigError);
  CHECK_THROWS_AS(gen_logistic_map(50, 3.2, 0.4), ConfigError);
}

TEST_CASE("synth_cohort cardinality and structure") {
  CohortSpec spec;
  spec.seed = 42;
  const auto cohort = synth_cohort(spec);
  REQUIRE(cohort.size() == 34);
  size_t patients = 0;
  for (const auto& rec : cohort) {
    CHECK(rec.n_channels() == 19);
    CHECK(rec.n_samples() == 10000);
    CHECK(rec.channels[0].label == "Fp1");
    CHECK(rec.channels[18].label == "O2");
    validate(rec);
    if (rec.class_label == ClassLabel::Patient) ++patients;
  }
  CHECK(patients == 14);
}

TEST_CASE("synth_cohort patient channels are more complex than control channels") {
  CohortSpec spec;
  spec.seed = 42;
  spec.channels = 19;
  const auto cohort = synth_cohort(spec);
  double patient_sum = 0.0, control_sum = 0.0;
  size_t patient_n = 0, control_n = 0;
  for (const auto& rec : cohort) {
    for (const auto& ch : rec.channels) {
      const double fd = higuchi_fd(ch.samples, {8});
      if (rec.class_label == ClassLabel::Patient) {
        patient_sum += fd;
        ++patient_n;
      } else {
        control_sum += fd;
        ++control_n;
      }
    }
  }
  CHECK(patient_sum / double(patient_n) > control_sum / double(control_n));
}

TEST_CASE("synth_cohort complexity ordering holds across 50 seeds") {
  // Default spec, mean HFD per class; run seeds in parallel to keep this fast.
  auto ordered_for_seed = [](uint64_t seed) {
    CohortSpec spec;
    spec.seed = seed;
    const auto cohort = synth_cohort(spec);
    double ps = 0, cs = 0;
    size_t pn = 0, cn = 0;
    for (const auto& rec : cohort) {
      for (const auto& ch : rec.channels) {
        const double fd = higuchi_fd(ch.samples, {8});
        if (rec.class_label == ClassLabel::Patient) {
          ps += fd;
          ++pn;
        } else {
          cs += fd;
          ++cn;
        }
      }
    }
    return ps / double(pn) > cs / double(cn);
  };
  std::atomic<size_t> next{0};
  std::atomic<size_t> ordered{0};
  const size_t workers = std::max<size_t>(2, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futures;
  for (size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (size_t seed = next.fetch_add(1); seed < 50; seed = next.fetch_add(1)) {
        if (ordered_for_seed(seed)) ordered.fetch_add(1);
      }
    }));
  }
  for (auto& f : futures) f.get();
  CHECK(ordered.load() == 50);
}

TEST_CASE("synth_cohort determinism and small cohorts") {
  CohortSpec spec;
  spec.n_patients = 1;
  spec.n_controls = 1;
  spec.channels = 1;
  spec.epoch_samples = 256;
  spec.seed = 5;
  const auto a = synth_cohort(spec);
  const auto b = synth_cohort(spec);
  REQUIRE(a.size() == 2);
  CHECK(a[0].subject_id != a[1].subject_id);
  for (size_t s = 0; s < a.size(); ++s) {
    REQUIRE(a[s].channels[0].samples.size() == 256);
    CHECK(std::memcmp(a[s].channels[0].samples.data(), b[s].channels[0].samples.data(),
                      256 * sizeof(double)) == 0);
  }
}

TEST_CASE("synth_cohort noise blend stays finite and deterministic") {
  CohortSpec spec;
  spec.n_patients = 1;
  spec.n_controls = 1;
  spec.channels = 2;
  spec.epoch_samples = 512;
  spec.noise_mix = 0.5;
  spec.seed = 3;
  const auto a = synth_cohort(spec);
  const auto b = synth_cohort(spec);
  for (size_t s = 0; s < 2; ++s) {
    for (size_t c = 0; c < 2; ++c) {
      for (size_t t = 0; t < 512; ++t) {
        REQUIRE(std::isfinite(a[s].channels[c].samples[t]));
        REQUIRE(a[s].channels[c].samples[t] == b[s].channels[c].samples[t]);
      }
    }
  }
}

TEST_CASE("cohort spec validation") {
  CohortSpec spec;
  spec.n_patients = 0;
  CHECK_THROWS_AS(synth_cohort(spec), ConfigError);
  spec = {};
  spec.epoch_samples = 99;
  CHECK_THROWS_AS(synth_cohort(spec), ConfigError);
  spec = {};
  spec.patient_hurst = 1.0;
  CHECK_THROWS_AS(synth_cohort(spec), ConfigError);
  spec = {};
  spec.noise_mix = 1.5;
  CHECK_THROWS_AS(synth_cohort(spec), ConfigError);
}

TEST_CASE("load_recording parses the channel csv format") {
  const auto dir = temp_dir("csv");
  {
    std::ofstream f(dir / "ok.csv");
    f << "Fp1,Fp2,F3\r\n";
    for (int i = 0; i < 100; ++i) f << i << "," << 2 * i << "," << i * 0.5 << "\n";
  }
  ManifestEntry entry{"ok.csv", "s1", ClassLabel::Patient, 1000.0};
  const auto rec = load_recording(dir / "ok.csv", entry);
  REQUIRE(rec.n_channels() == 3);
  CHECK(rec.n_samples() == 100);
  CHECK(rec.channels[0].label == "Fp1");
  CHECK(rec.channels[1].samples[3] == 6.0);
  CHECK(rec.subject_id == "s1");
  CHECK(rec.class_label == ClassLabel::Patient);
}

TEST_CASE("load_recording error paths") {
  const auto dir = temp_dir("csv_err");
  ManifestEntry entry{"", "s1", ClassLabel::Control, 1000.0};

  {
    std::ofstream f(dir / "ragged.csv");
    f << "a,b\n1,2\n3\n";
  }
  CHECK_THROWS_WITH_AS(load_recording(dir / "ragged.csv", entry),
                       doctest::Contains("row 2"), DataError);

  {
    std::ofstream f(dir / "nonnum.csv");
    f << "a,b\n1,2\n3,oops\n";
  }
  try {
    load_recording(dir / "nonnum.csv", entry);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }

  {
    std::ofstream f(dir / "header_only.csv");
    f << "a,b\n";
  }
  CHECK_THROWS_WITH_AS(load_recording(dir / "header_only.csv", entry),
                       doctest::Contains("no samples"), DataError);

  { std::ofstream f(dir / "empty.csv"); }
  CHECK_THROWS_AS(load_recording(dir / "empty.csv", entry), DataError);
  CHECK_THROWS_AS(load_recording(dir / "missing.csv", entry), DataError);
}

TEST_CASE("recording save/load round trip is exact") {
  CohortSpec spec;
  spec.n_patients = 1;
  spec.n_controls = 1;
  spec.channels = 3;
  spec.epoch_samples = 150;
  spec.seed = 11;
  const auto cohort = synth_cohort(spec);
  const auto dir = temp_dir("roundtrip");
  save_recording(dir / "r.csv", cohort[0]);
  ManifestEntry entry{"r.csv", cohort[0].subject_id, cohort[0].class_label, 1000.0};
  const auto back = load_recording(dir / "r.csv", entry);
  REQUIRE(back.n_channels() == 3);
  for (size_t c = 0; c < 3; ++c) {
    CHECK(back.channels[c].label == cohort[0].channels[c].label);
    REQUIRE(back.channels[c].samples.size() == 150);
    for (size_t t = 0; t < 150; ++t) {
      CHECK(back.channels[c].samples[t] == cohort[0].channels[c].samples[t]);
    }
  }
}

TEST_CASE("manifest round trip and validation") {
  const auto dir = temp_dir("manifest");
  std::vector<ManifestEntry> entries = {{"a.csv", "s1", ClassLabel::Patient, 1000.0},
                                        {"b.csv", "s2", ClassLabel::Control, 250.0}};
  save_manifest(dir / "manifest.json", entries);
  const auto back = load_manifest(dir / "manifest.json");
  REQUIRE(back.size() == 2);
  CHECK(back[0].file == "a.csv");
  CHECK(back[0].label == ClassLabel::Patient);
  CHECK(back[1].sampling_rate_hz == 250.0);

  {
    std::ofstream f(dir / "bad_label.json");
    f << R"([{"file":"x.csv","subject_id":"s","label":"sick","sampling_rate_hz":1000}])";
  }
  CHECK_THROWS_AS(load_manifest(dir / "bad_label.json"), DataError);
  {
    std::ofstream f(dir / "not_array.json");
    f << R"({"file":"x.csv"})";
  }
  CHECK_THROWS_AS(load_manifest(dir / "not_array.json"), DataError);
  CHECK_THROWS_AS(load_manifest(dir / "missing.json"), DataError);
}

TEST_CASE("epoch windows") {
  CohortSpec spec;
  spec.n_patients = 1;
  spec.n_controls = 1;
  spec.channels = 2;
  spec.epoch_samples = 10000;
  spec.seed = 1;
  const auto rec = synth_cohort(spec)[0];

  SUBCASE("non-overlapping windows up to max_epochs") {
    const auto epochs = epoch(rec, 2500, 4);
    REQUIRE(epochs.size() == 4);
    for (const auto& e : epochs) {
      CHECK(e.n_samples() == 2500);
      CHECK(e.subject_id == rec.subject_id);
      CHECK(e.class_label == rec.class_label);
    }
    // Disjoint consecutive windows concatenate to a prefix of the source.
    for (size_t c = 0; c < rec.n_channels(); ++c) {
      size_t pos = 0;
      for (const auto& e : epochs) {
        for (double v : e.channels[c].samples) {
          CHECK(v == rec.channels[c].samples[pos]);
          ++pos;
        }
      }
    }
  }
  SUBCASE("identity epoch") {
    const auto epochs = epoch(rec, 10000, 4);
    REQUIRE(epochs.size() == 1);
    CHECK(epochs[0].channels[0].samples == rec.channels[0].samples);
  }
  SUBCASE("max_epochs truncates the available windows") {
    CHECK(epoch(rec, 2500, 2).size() == 2);
    CHECK(epoch(rec, 3000, 100).size() == 3);
  }
  SUBCASE("recording shorter than one epoch") {
    auto short_rec = rec;
    for (auto& ch : short_rec.channels) ch.samples.resize(999);
    CHECK_THROWS_AS(epoch(short_rec, 1000, 1), DataError);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(epoch(rec, 99, 1), ConfigError);
    CHECK_THROWS_AS(epoch(rec, 2500, 0), ConfigError);
  }
}

}  // TEST_SUITE("signal")
