#pragma once

#include <string>
#include <vector>

#include "shiftscan/matrix.hpp"

namespace shiftscan {

/// Feature rows plus class labels; column order is fixed and recorded.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> word_ids;
  Matrix x;                 // n x f
  std::vector<int> labels;  // subset of {0, 1, 2}
};

/// Multinomial logistic regression over z-scored features.
struct ClassifierModel {
  Matrix weights;                  // classes x features, in z-scored space
  std::vector<double> intercepts;  // per class
  std::vector<double> feat_mean;
  std::vector<double> feat_std;
  std::vector<int> classes;  // ascending
  std::vector<double> objective_trace;  // per accepted iteration, non-increasing
};

/// Fit by full-batch gradient descent on the L2-regularized mean negative
/// log-likelihood, zero-initialized, with step halving on any increase;
/// stops when the gradient max-norm is <= 1e-6 or after 5000 iterations.
/// Deterministic. Throws DataError on single-class data or constant features.
ClassifierModel fit_logreg(const FeatureMatrix& data, double l2);

/// Per-row class probabilities (softmax), rows summing to 1.
Matrix predict_proba(const ClassifierModel& model, const Matrix& rows);

/// Argmax-probability class per row; ties go to the smaller class label.
std::vector<int> predict(const ClassifierModel& model, const Matrix& rows);

}  // namespace shiftscan
