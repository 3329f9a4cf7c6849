#pragma once

#include <span>

#include "eegcx/classifiers.hpp"

// Family score functions shared between the trainers and the predict
// dispatch. Internal to the library.
namespace eegcx {

double naive_bayes_score(const NaiveBayesModel& nb, std::span<const double> x);
double logistic_score(const LogisticModel& lr, std::span<const double> x);
double svm_decision(const SvmModel& svm, std::span<const double> x);
double tree_patient_fraction(const DecisionTreeModel& tree, std::span<const double> x);

}  // namespace eegcx
