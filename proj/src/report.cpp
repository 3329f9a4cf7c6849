#include "eegcx/report.hpp"

#include <cstdio>
#include <cstring>

#include <nlohmann/json.hpp>

namespace eegcx {

namespace {

using nlohmann::json;

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v);
  return buf;
}

std::string auc3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void pad_to(std::string& line, size_t width) {
  while (line.size() < width) line.push_back(' ');
}

json config_to_json(const CvConfig& config) {
  return {{"folds", config.folds},
          {"seed", config.seed},
          {"grouping", config.grouping == Grouping::BySubject ? "subject" : "instance"},
          {"preprocessing", config.placement == PreprocessingPlacement::InsideFolds
                                ? "inside_folds"
                                : "whole_dataset"},
          {"pc_counts", config.pc_counts},
          {"restandardize_pcs", config.restandardize_pcs}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json doc;
  doc["mode"] = report.leaky ? "LEAKY" : "proper";
  doc["config"] = config_to_json(report.config);
  doc["pc_counts"] = report.pc_counts;
  doc["explained_variance_pct"] = report.explained_variance_pct;
  doc["average_accuracy_pct"] = report.average_accuracy_pct;

  json cells = json::array();
  for (size_t c = 0; c < report.classifiers.size(); ++c) {
    for (size_t p = 0; p < report.pc_counts.size(); ++p) {
      cells.push_back({{"classifier", to_string(report.classifiers[c])},
                       {"display_name", display_name(report.classifiers[c])},
                       {"pc_count", report.pc_counts[p]},
                       {"accuracy_pct", report.cells[c][p].accuracy_pct},
                       {"auc", report.cells[c][p].auc}});
    }
  }
  doc["cells"] = std::move(cells);

  json preds = json::array();
  for (const auto& rec : report.predictions) {
    preds.push_back({{"row", rec.row},
                     {"subject_id", rec.subject_id},
                     {"fold", rec.fold},
                     {"classifier", to_string(rec.classifier)},
                     {"pc_count", rec.pc_count},
                     {"score", rec.score},
                     {"predicted", std::string(to_string(rec.predicted))},
                     {"truth", std::string(to_string(rec.truth))}});
  }
  doc["predictions"] = std::move(preds);
  return doc.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  const size_t name_width = 34;
  const size_t col_width = 17;  // one "Accuracy AUC" group per pc_count

  std::string out = "CLASSIFICATION RESULTS FOR DIFFERENT CLASSIFIERS AND NUMBERS OF PRINCIPAL COMPONENTS\n";
  out += report.leaky ? "MODE: LEAKY (whole-dataset preprocessing; optimistic by construction)\n"
                      : "MODE: proper (fold-internal preprocessing)\n";

  auto add_row = [&](const std::string& head, const std::vector<std::string>& groups) {
    std::string line = head;
    pad_to(line, name_width);
    for (const auto& g : groups) {
      line += "| ";
      std::string cell = g;
      pad_to(cell, col_width - 2);
      line += cell;
    }
    out += line;
    out.push_back('\n');
  };

  std::vector<std::string> header_cells, ev_cells, subhead_cells, avg_cells;
  for (size_t p = 0; p < report.pc_counts.size(); ++p) {
    header_cells.push_back(std::to_string(report.pc_counts[p]));
    ev_cells.push_back(pct(report.explained_variance_pct[p]));
    subhead_cells.push_back("Accuracy  AUC");
    avg_cells.push_back(pct(report.average_accuracy_pct[p]));
  }
  add_row("Number of principal components", header_cells);
  add_row("Explained variance", ev_cells);
  add_row("Classifier", subhead_cells);

  for (size_t c = 0; c < report.classifiers.size(); ++c) {
    std::vector<std::string> cells;
    for (size_t p = 0; p < report.pc_counts.size(); ++p) {
      cells.push_back(pct(report.cells[c][p].accuracy_pct) + "  " + auc3(report.cells[c][p].auc));
    }
    add_row(display_name(report.classifiers[c]), cells);
  }
  add_row("Average accuracy", avg_cells);
  return out;
}

std::string audit_to_json(const AuditConfig& config, const std::vector<AuditRow>& leakage,
                          const std::vector<OptimismPoint>& curve) {
  json doc;
  doc["config"] = {{"n", config.n},
                   {"k", config.k},
                   {"seeds", config.seeds},
                   {"folds", config.folds},
                   {"seed", config.seed}};
  json rows = json::array();
  for (const auto& row : leakage) {
    rows.push_back({{"pipeline", row.pipeline},
                    {"mean_accuracy_pct", row.mean_accuracy_pct},
                    {"sd_accuracy_pct", row.sd_accuracy_pct}});
  }
  doc["leakage"] = std::move(rows);
  json points = json::array();
  for (const auto& point : curve) {
    points.push_back({{"n", point.n},
                      {"k", point.k},
                      {"mean_accuracy_pct", point.mean_accuracy_pct},
                      {"sd_accuracy_pct", point.sd_accuracy_pct}});
  }
  doc["optimism_curve"] = std::move(points);
  return doc.dump(2) + "\n";
}

std::string audit_to_csv(const std::vector<AuditRow>& leakage,
                         const std::vector<OptimismPoint>& curve) {
  std::string out = "table,pipeline,n,k,mean_accuracy_pct,sd_accuracy_pct\n";
  char buf[160];
  for (const auto& row : leakage) {
    std::snprintf(buf, sizeof(buf), "leakage,%s,,,%.17g,%.17g\n", row.pipeline.c_str(),
                  row.mean_accuracy_pct, row.sd_accuracy_pct);
    out += buf;
  }
  for (const auto& point : curve) {
    std::snprintf(buf, sizeof(buf), "curve,selection_leak,%zu,%zu,%.17g,%.17g\n", point.n, point.k,
                  point.mean_accuracy_pct, point.sd_accuracy_pct);
    out += buf;
  }
  return out;
}

}  // namespace eegcx
