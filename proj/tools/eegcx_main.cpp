#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eegcx/errors.hpp"
#include "eegcx/eval.hpp"
#include "eegcx/feature_space.hpp"
#include "eegcx/features.hpp"
#include "eegcx/report.hpp"
#include "eegcx/signal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenerateOpts {
  std::string out;
  uint64_t seed{42};
  size_t patients{14};
  size_t controls{20};
  size_t channels{19};
  size_t samples{10000};
  double patient_hurst{0.3};
  double control_hurst{0.7};
  double noise_mix{0.0};
  double rate_hz{1000.0};
};

struct ExtractOpts {
  std::string manifest;
  std::string out;
  size_t kmax{8};
  size_t m{2};
  double r_factor{0.15};
  std::string channels;  // comma list of labels; empty = all
  size_t epoch_samples{0};
  size_t max_epochs{1};
  size_t threads{0};
};

struct EvaluateOpts {
  std::string features;
  std::string out;
  size_t folds{10};
  std::string pc{"1,2,3,10"};
  std::string mode{"proper"};
  std::string group{"subject"};
  bool restandardize_pcs{true};
  uint64_t seed{42};
};

struct AuditOpts {
  std::string out;
  size_t n{34};
  size_t k{38};
  size_t seeds{50};
  size_t folds{10};
  uint64_t seed{42};
  std::string sizes;  // comma list; when set, also run the optimism curve
  std::string ks;     // comma list for the k sweep (defaults to --k)
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<size_t> parse_count_list(const std::string& text, const char* what) {
  std::vector<size_t> out;
  for (const auto& tok : split_list(text)) {
    size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      throw eegcx::ConfigError(std::string(what) + ": \"" + tok + "\" is not a count");
    }
    if (pos != tok.size()) {
      throw eegcx::ConfigError(std::string(what) + ": \"" + tok + "\" is not a count");
    }
    out.push_back(static_cast<size_t>(v));
  }
  if (out.empty()) throw eegcx::ConfigError(std::string(what) + ": empty list");
  return out;
}

fs::path ensure_out_dir(const std::string& out) {
  if (out.empty()) throw eegcx::ConfigError("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw eegcx::DataError("cannot create output directory " + dir.string());
  }
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw eegcx::DataError("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw eegcx::DataError("write failed for " + path.string());
}

// Every command stamps its exact configuration and master seed next to the
// artifacts it writes, so any output can be reproduced from the echo alone.
void write_run_config(const fs::path& dir, const json& echo) {
  write_text(dir / "run_config.json", echo.dump(2) + "\n");
}

int cmd_generate(const GenerateOpts& opts) {
  const auto dir = ensure_out_dir(opts.out);
  eegcx::CohortSpec spec;
  spec.n_patients = opts.patients;
  spec.n_controls = opts.controls;
  spec.channels = opts.channels;
  spec.epoch_samples = opts.samples;
  spec.seed = opts.seed;
  spec.patient_hurst = opts.patient_hurst;
  spec.control_hurst = opts.control_hurst;
  spec.noise_mix = opts.noise_mix;
  spec.sampling_rate_hz = opts.rate_hz;

  const auto cohort = eegcx::synth_cohort(spec);
  std::vector<eegcx::ManifestEntry> manifest;
  manifest.reserve(cohort.size());
  for (const auto& rec : cohort) {
    const std::string file = rec.subject_id + ".csv";
    eegcx::save_recording(dir / file, rec);
    manifest.push_back({file, rec.subject_id, rec.class_label, rec.sampling_rate_hz});
  }
  eegcx::save_manifest(dir / "manifest.json", manifest);
  write_run_config(dir, json{{"command", "generate"},
                             {"seed", opts.seed},
                             {"patients", opts.patients},
                             {"controls", opts.controls},
                             {"channels", opts.channels},
                             {"samples", opts.samples},
                             {"patient_hurst", opts.patient_hurst},
                             {"control_hurst", opts.control_hurst},
                             {"noise_mix", opts.noise_mix},
                             {"sampling_rate_hz", opts.rate_hz}});

  std::printf("wrote %zu subjects (%zu patients, %zu controls), %zu channels x %zu samples to %s\n",
              cohort.size(), opts.patients, opts.controls, opts.channels, opts.samples,
              dir.string().c_str());
  return 0;
}

int cmd_extract(const ExtractOpts& opts) {
  const auto dir = ensure_out_dir(opts.out);
  const fs::path manifest_path(opts.manifest);
  const auto entries = eegcx::load_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();

  const auto wanted = split_list(opts.channels);
  std::vector<eegcx::Recording> instances;
  for (const auto& entry : entries) {
    auto rec = eegcx::load_recording(base / entry.file, entry);
    if (!wanted.empty()) {
      eegcx::Recording filtered;
      filtered.subject_id = rec.subject_id;
      filtered.class_label = rec.class_label;
      filtered.sampling_rate_hz = rec.sampling_rate_hz;
      for (const auto& label : wanted) {
        bool found = false;
        for (const auto& ch : rec.channels) {
          if (ch.label == label) {
            filtered.channels.push_back(ch);
            found = true;
            break;
          }
        }
        if (!found) {
          throw eegcx::ConfigError("--channels: label \"" + label + "\" not present in " +
                                   entry.file);
        }
      }
      rec = std::move(filtered);
    }
    if (opts.epoch_samples > 0) {
      auto epochs = eegcx::epoch(rec, opts.epoch_samples, opts.max_epochs);
      for (auto& e : epochs) instances.push_back(std::move(e));
    } else {
      instances.push_back(std::move(rec));
    }
  }

  eegcx::HfdParams hfd{opts.kmax};
  eegcx::SampEnParams se{opts.m, opts.r_factor};
  const auto matrix = eegcx::build_feature_matrix(instances, hfd, se, opts.threads);
  eegcx::save_feature_matrix(dir / "features.csv", matrix);
  write_run_config(dir, json{{"command", "extract"},
                             {"manifest", opts.manifest},
                             {"kmax", opts.kmax},
                             {"m", opts.m},
                             {"r_factor", opts.r_factor},
                             {"channels", opts.channels},
                             {"epoch_samples", opts.epoch_samples},
                             {"max_epochs", opts.max_epochs}});

  std::printf("wrote %zu x %zu feature matrix to %s\n", matrix.n_rows(), matrix.n_cols(),
              (dir / "features.csv").string().c_str());
  return 0;
}

int cmd_evaluate(const EvaluateOpts& opts) {
  const auto dir = ensure_out_dir(opts.out);
  const auto matrix = eegcx::load_feature_matrix(opts.features);

  eegcx::CvConfig config;
  config.folds = opts.folds;
  config.seed = opts.seed;
  config.pc_counts = parse_count_list(opts.pc, "--pc");
  config.restandardize_pcs = opts.restandardize_pcs;
  if (opts.mode == "proper") {
    config.placement = eegcx::PreprocessingPlacement::InsideFolds;
  } else if (opts.mode == "leaky") {
    config.placement = eegcx::PreprocessingPlacement::WholeDataset;
  } else {
    throw eegcx::ConfigError("--mode must be proper or leaky");
  }
  if (opts.group == "subject") {
    config.grouping = eegcx::Grouping::BySubject;
  } else if (opts.group == "instance") {
    config.grouping = eegcx::Grouping::ByInstance;
  } else {
    throw eegcx::ConfigError("--group must be subject or instance");
  }

  const auto report = eegcx::run_cv(matrix, config);
  const auto table = eegcx::report_to_table(report);
  write_text(dir / "report.json", eegcx::report_to_json(report));
  write_text(dir / "report.txt", table);

  // Descriptive whole-dataset loadings, the Figure-1 style export.
  const auto scaler = eegcx::fit_scaler(matrix);
  const auto pca = eegcx::fit_pca(eegcx::apply_scaler(scaler, matrix));
  const size_t n_load = std::min<size_t>(10, matrix.n_cols());
  eegcx::save_loadings(dir / "loadings.csv", pca, n_load, false);
  eegcx::save_loadings(dir / "loadings_abs.csv", pca, n_load, true);

  write_run_config(dir, json{{"command", "evaluate"},
                             {"features", opts.features},
                             {"folds", opts.folds},
                             {"pc", opts.pc},
                             {"mode", opts.mode},
                             {"group", opts.group},
                             {"restandardize_pcs", opts.restandardize_pcs},
                             {"seed", opts.seed}});

  std::fputs(table.c_str(), stdout);
  std::printf("report written to %s\n", (dir / "report.json").string().c_str());
  return 0;
}

int cmd_audit(const AuditOpts& opts) {
  const auto dir = ensure_out_dir(opts.out);
  eegcx::AuditConfig config;
  config.n = opts.n;
  config.k = opts.k;
  config.seeds = opts.seeds;
  config.folds = opts.folds;
  config.seed = opts.seed;

  const auto leakage = eegcx::leakage_audit(config);
  std::vector<eegcx::OptimismPoint> curve;
  if (!opts.sizes.empty()) {
    const auto sizes = parse_count_list(opts.sizes, "--sizes");
    const auto ks = opts.ks.empty() ? std::vector<size_t>{opts.k}
                                    : parse_count_list(opts.ks, "--ks");
    curve = eegcx::optimism_curve(sizes, ks, opts.seeds, opts.folds, opts.seed);
  }

  write_text(dir / "audit.json", eegcx::audit_to_json(config, leakage, curve));
  write_text(dir / "audit.csv", eegcx::audit_to_csv(leakage, curve));
  write_run_config(dir, json{{"command", "audit"},
                             {"n", opts.n},
                             {"k", opts.k},
                             {"seeds", opts.seeds},
                             {"folds", opts.folds},
                             {"seed", opts.seed},
                             {"sizes", opts.sizes},
                             {"ks", opts.ks}});

  for (const auto& row : leakage) {
    std::printf("%-20s mean accuracy %6.2f%%  sd %5.2f\n", row.pipeline.c_str(),
                row.mean_accuracy_pct, row.sd_accuracy_pct);
  }
  for (const auto& point : curve) {
    std::printf("selection leak @ n=%-5zu k=%-4zu mean accuracy %6.2f%%  sd %5.2f\n", point.n,
                point.k, point.mean_accuracy_pct, point.sd_accuracy_pct);
  }
  std::printf("audit written to %s\n", (dir / "audit.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG complexity classification testbed: synthetic cohorts, HFD/SampEn features,\n"
               "PCA, seven classifiers under stratified k-fold CV, and leakage/optimism audits."};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Synthesize a cohort of channel CSVs + manifest");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--patients", gen.patients, "Number of patients");
  generate->add_option("--controls", gen.controls, "Number of controls");
  generate->add_option("--channels", gen.channels, "Channels per subject");
  generate->add_option("--samples", gen.samples, "Samples per channel");
  generate->add_option("--patient-hurst", gen.patient_hurst, "Hurst exponent, patient class");
  generate->add_option("--control-hurst", gen.control_hurst, "Hurst exponent, control class");
  generate->add_option("--noise-mix", gen.noise_mix, "White-noise blend in [0,1]");
  generate->add_option("--rate", gen.rate_hz, "Sampling rate in Hz");

  ExtractOpts ext;
  auto* extract = app.add_subcommand("extract", "Compute HFD/SampEn features from a manifest");
  extract->add_option("--manifest", ext.manifest, "Cohort manifest json")->required();
  extract->add_option("--out", ext.out, "Output directory")->required();
  extract->add_option("--kmax", ext.kmax, "Largest Higuchi scale");
  extract->add_option("--m", ext.m, "Sample entropy template length");
  extract->add_option("--r-factor", ext.r_factor, "Sample entropy tolerance factor");
  extract->add_option("--channels", ext.channels, "Comma list of channel labels (default: all)");
  extract->add_option("--epoch-samples", ext.epoch_samples,
                      "Cut each recording into epochs of this length (0 = whole recording)");
  extract->add_option("--max-epochs", ext.max_epochs, "Epochs per recording when cutting");
  extract->add_option("--threads", ext.threads, "Worker threads (0 = auto); never changes results");

  EvaluateOpts ev;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated classifier grid over PC counts");
  evaluate->add_option("--features", ev.features, "Feature matrix csv")->required();
  evaluate->add_option("--out", ev.out, "Output directory")->required();
  evaluate->add_option("--folds", ev.folds, "Cross-validation folds");
  evaluate->add_option("--pc", ev.pc, "Comma list of principal-component counts");
  evaluate->add_option("--mode", ev.mode, "proper | leaky");
  evaluate->add_option("--group", ev.group, "subject | instance fold grouping");
  evaluate->add_option("--restandardize-pcs", ev.restandardize_pcs,
                       "Re-standardize projected PCs inside folds");
  evaluate->add_option("--seed", ev.seed, "Master seed");

  AuditOpts aud;
  auto* audit = app.add_subcommand("audit", "Leakage/optimism audits on null data");
  audit->add_option("--out", aud.out, "Output directory")->required();
  audit->add_option("--n", aud.n, "Instances per null dataset");
  audit->add_option("--k", aud.k, "Features per null dataset");
  audit->add_option("--seeds", aud.seeds, "Monte-Carlo repetitions");
  audit->add_option("--folds", aud.folds, "Cross-validation folds");
  audit->add_option("--seed", aud.seed, "Master seed");
  audit->add_option("--sizes", aud.sizes, "Comma list of n values for the optimism curve");
  audit->add_option("--ks", aud.ks, "Comma list of k values for the optimism curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (extract->parsed()) return cmd_extract(ext);
    if (evaluate->parsed()) return cmd_evaluate(ev);
    if (audit->parsed()) return cmd_audit(aud);
  } catch (const eegcx::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const eegcx::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const eegcx::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const eegcx::TrainingError& e) {
    std::fprintf(stderr, "training error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
