#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"
#include "eegcx/eval.hpp"
#include "eegcx/feature_space.hpp"
#include "eegcx/features.hpp"
#include "eegcx/report.hpp"
#include "eegcx/signal.hpp"

namespace py = pybind11;
using namespace eegcx;

namespace {

ClassLabel label_from_string(const std::string& s) {
  if (s == "patient") return ClassLabel::Patient;
  if (s == "control") return ClassLabel::Control;
  throw ConfigError("label must be \"patient\" or \"control\", got \"" + s + "\"");
}

std::vector<ClassLabel> labels_from_strings(const std::vector<std::string>& in) {
  std::vector<ClassLabel> out;
  out.reserve(in.size());
  for (const auto& s : in) out.push_back(label_from_string(s));
  return out;
}

FeatureMatrix make_feature_matrix(std::vector<std::string> names,
                                  std::vector<std::vector<double>> rows,
                                  std::vector<std::string> subject_ids,
                                  std::vector<std::string> labels) {
  if (rows.size() != subject_ids.size() || rows.size() != labels.size()) {
    throw ConfigError("feature matrix: rows, subject_ids and labels must have equal length");
  }
  FeatureMatrix m;
  m.feature_names = std::move(names);
  m.rows = std::move(rows);
  m.meta.reserve(subject_ids.size());
  for (size_t i = 0; i < subject_ids.size(); ++i) {
    m.meta.push_back({subject_ids[i], label_from_string(labels[i])});
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_eegcx, m) {
  m.doc() = "EEG complexity classification testbed (C++ core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);

  py::class_<Recording>(m, "Recording")
      .def_readonly("subject_id", &Recording::subject_id)
      .def_property_readonly("label",
                             [](const Recording& r) { return std::string(to_string(r.class_label)); })
      .def_readonly("sampling_rate_hz", &Recording::sampling_rate_hz)
      .def_property_readonly("channel_labels",
                             [](const Recording& r) {
                               std::vector<std::string> labels;
                               for (const auto& ch : r.channels) labels.push_back(ch.label);
                               return labels;
                             })
      .def("samples",
           [](const Recording& r, const std::string& label) {
             for (const auto& ch : r.channels) {
               if (ch.label == label) return ch.samples;
             }
             throw ConfigError("no channel labeled \"" + label + "\"");
           })
      .def("__repr__", [](const Recording& r) {
        return "<Recording " + r.subject_id + ": " + std::to_string(r.n_channels()) +
               " channels x " + std::to_string(r.n_samples()) + " samples>";
      });

  py::class_<FeatureMatrix>(m, "FeatureMatrix")
      .def(py::init(&make_feature_matrix), py::arg("feature_names"), py::arg("rows"),
           py::arg("subject_ids"), py::arg("labels"))
      .def_readonly("feature_names", &FeatureMatrix::feature_names)
      .def_readonly("rows", &FeatureMatrix::rows)
      .def_property_readonly("subject_ids",
                             [](const FeatureMatrix& fm) {
                               std::vector<std::string> ids;
                               for (const auto& meta : fm.meta) ids.push_back(meta.subject_id);
                               return ids;
                             })
      .def_property_readonly("labels",
                             [](const FeatureMatrix& fm) {
                               std::vector<std::string> labels;
                               for (const auto& meta : fm.meta) {
                                 labels.emplace_back(to_string(meta.label));
                               }
                               return labels;
                             })
      .def("__repr__", [](const FeatureMatrix& fm) {
        return "<FeatureMatrix " + std::to_string(fm.n_rows()) + " x " +
               std::to_string(fm.n_cols()) + ">";
      });

  m.def("gen_fgn", &gen_fgn, py::arg("n"), py::arg("hurst"), py::arg("seed"),
        "Fractional Gaussian noise via circulant embedding");
  m.def("gen_logistic_map", &gen_logistic_map, py::arg("n"), py::arg("r"), py::arg("x0"));

  m.def(
      "higuchi_fd",
      [](const std::vector<double>& series, size_t k_max) {
        return higuchi_fd(series, HfdParams{k_max});
      },
      py::arg("series"), py::arg("k_max") = 8);
  m.def(
      "sample_entropy",
      [](const std::vector<double>& series, size_t m_len, double r_factor) {
        return sample_entropy(series, SampEnParams{m_len, r_factor});
      },
      py::arg("series"), py::arg("m") = 2, py::arg("r_factor") = 0.15);
  m.def(
      "sample_entropy_counts",
      [](const std::vector<double>& series, size_t m_len, double r_factor) {
        const auto counts = sample_entropy_counts(series, SampEnParams{m_len, r_factor});
        return py::make_tuple(counts.extended_matches, counts.template_matches);
      },
      py::arg("series"), py::arg("m") = 2, py::arg("r_factor") = 0.15,
      "Returns (A, B): matches at length m+1 and at length m");

  m.def(
      "synth_cohort",
      [](size_t patients, size_t controls, size_t channels, size_t samples, uint64_t seed,
         double patient_hurst, double control_hurst, double noise_mix) {
        CohortSpec spec;
        spec.n_patients = patients;
        spec.n_controls = controls;
        spec.channels = channels;
        spec.epoch_samples = samples;
        spec.seed = seed;
        spec.patient_hurst = patient_hurst;
        spec.control_hurst = control_hurst;
        spec.noise_mix = noise_mix;
        return synth_cohort(spec);
      },
      py::arg("patients") = 14, py::arg("controls") = 20, py::arg("channels") = 19,
      py::arg("samples") = 10000, py::arg("seed") = 0, py::arg("patient_hurst") = 0.3,
      py::arg("control_hurst") = 0.7, py::arg("noise_mix") = 0.0);

  m.def(
      "build_feature_matrix",
      [](const std::vector<Recording>& instances, size_t k_max, size_t m_len, double r_factor,
         size_t threads) {
        return build_feature_matrix(instances, HfdParams{k_max}, SampEnParams{m_len, r_factor},
                                    threads);
      },
      py::arg("instances"), py::arg("k_max") = 8, py::arg("m") = 2, py::arg("r_factor") = 0.15,
      py::arg("threads") = 0);

  py::class_<Scaler>(m, "Scaler")
      .def_readonly("feature_names", &Scaler::feature_names)
      .def_readonly("means", &Scaler::means)
      .def_readonly("sds", &Scaler::sds);
  py::class_<PcaModel>(m, "PcaModel")
      .def_readonly("feature_names", &PcaModel::feature_names)
      .def_readonly("means", &PcaModel::means)
      .def_readonly("eigenvectors", &PcaModel::eigenvectors)
      .def_readonly("eigenvalues", &PcaModel::eigenvalues);

  m.def("fit_scaler", &fit_scaler);
  m.def("apply_scaler", &apply_scaler);
  m.def("fit_pca", &fit_pca);
  m.def("project", &project, py::arg("pca"), py::arg("matrix"), py::arg("m"));
  m.def("explained_variance", &explained_variance, py::arg("pca"), py::arg("m"));

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_readonly("feature_names", &TrainedModel::feature_names)
      .def_property_readonly("family",
                             [](const TrainedModel& model) { return std::string(to_string(model.kind)); })
      .def("predict_score",
           [](const TrainedModel& model, const std::vector<double>& x) {
             return predict_score(model, x);
           })
      .def("predict_label",
           [](const TrainedModel& model, const std::vector<double>& x) {
             return std::string(to_string(predict_label(model, x)));
           })
      .def("to_json", &model_to_json);

  m.def(
      "train",
      [](const std::string& family, const std::vector<std::vector<double>>& rows,
         const std::vector<std::string>& labels, const std::vector<std::string>& feature_names,
         uint64_t seed) {
        LabeledDataset data;
        data.rows = rows;
        data.labels = labels_from_strings(labels);
        if (feature_names.empty()) {
          for (size_t c = 0; c < (rows.empty() ? 0 : rows[0].size()); ++c) {
            data.feature_names.push_back("x" + std::to_string(c + 1));
          }
        } else {
          data.feature_names = feature_names;
        }
        return train_classifier(classifier_kind_from_string(family), data, seed);
      },
      py::arg("family"), py::arg("rows"), py::arg("labels"),
      py::arg("feature_names") = std::vector<std::string>{}, py::arg("seed") = 0,
      "family: naive_bayes | logistic | mlp | svm_linear | svm_poly2 | decision_tree | "
      "random_forest");
  m.def("model_from_json", &model_from_json);

  m.def(
      "compute_auc",
      [](const std::vector<double>& scores, const std::vector<std::string>& truth) {
        return compute_auc(scores, labels_from_strings(truth));
      },
      py::arg("scores"), py::arg("truth"));

  m.def(
      "run_cv_json",
      [](const FeatureMatrix& features, size_t folds, uint64_t seed, const std::string& mode,
         const std::string& group, const std::vector<size_t>& pc_counts, bool restandardize_pcs) {
        CvConfig config;
        config.folds = folds;
        config.seed = seed;
        config.pc_counts = pc_counts;
        config.restandardize_pcs = restandardize_pcs;
        if (mode == "proper") {
          config.placement = PreprocessingPlacement::InsideFolds;
        } else if (mode == "leaky") {
          config.placement = PreprocessingPlacement::WholeDataset;
        } else {
          throw ConfigError("mode must be proper or leaky");
        }
        if (group == "subject") {
          config.grouping = Grouping::BySubject;
        } else if (group == "instance") {
          config.grouping = Grouping::ByInstance;
        } else {
          throw ConfigError("group must be subject or instance");
        }
        return report_to_json(run_cv(features, config));
      },
      py::arg("features"), py::arg("folds") = 10, py::arg("seed") = 0, py::arg("mode") = "proper",
      py::arg("group") = "subject", py::arg("pc_counts") = std::vector<size_t>{1, 2, 3, 10},
      py::arg("restandardize_pcs") = true);

  m.def(
      "leakage_audit_json",
      [](size_t n, size_t k, size_t seeds, size_t folds, uint64_t seed) {
        AuditConfig config{n, k, seeds, folds, seed};
        return audit_to_json(config, leakage_audit(config), {});
      },
      py::arg("n") = 34, py::arg("k") = 38, py::arg("seeds") = 50, py::arg("folds") = 10,
      py::arg("seed") = 42);

  m.def(
      "optimism_curve_json",
      [](const std::vector<size_t>& sizes, const std::vector<size_t>& ks, size_t seeds,
         size_t folds, uint64_t seed) {
        AuditConfig config{0, 0, seeds, folds, seed};
        return audit_to_json(config, {}, optimism_curve(sizes, ks, seeds, folds, seed));
      },
      py::arg("sizes"), py::arg("ks"), py::arg("seeds") = 50, py::arg("folds") = 10,
      py::arg("seed") = 42);
}
