#pragma once

#include <string>
#include <vector>

#include "eegcx/eval.hpp"

namespace eegcx {

// Machine-readable report: config echo, grid cells, summaries, per-fold
// predictions. Contains no timestamps, so identical runs are byte-identical.
std::string report_to_json(const EvalReport& report);

// Fixed-width table: classifiers as rows, one Accuracy/AUC column pair
// per pc_count, with explained-variance and average-accuracy summary rows.
std::string report_to_table(const EvalReport& report);

std::string audit_to_json(const AuditConfig& config, const std::vector<AuditRow>& leakage,
                          const std::vector<OptimismPoint>& curve);
std::string audit_to_csv(const std::vector<AuditRow>& leakage,
                         const std::vector<OptimismPoint>& curve);

}  // namespace eegcx
