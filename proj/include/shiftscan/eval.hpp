#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "shiftscan/logreg.hpp"

namespace shiftscan {

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // per row
  std::vector<std::string> warnings;
};

/// Distribute each class's members across k folds as evenly as possible
/// (per-class fold sizes differ by at most 1). Deterministic given seed.
/// Warns (best effort) when k exceeds the smallest class size.
FoldAssignment stratified_kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

/// Unweighted mean of per-class F1 over the classes present in gold;
/// a class's F1 is 0 when precision + recall is 0.
double macro_f1(const std::vector<int>& gold, const std::vector<int>& pred);

struct ClassStats {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::string method;
  std::string regime;
  double macro_f1_score = 0.0;
  std::size_t fold_count = 0;
  std::vector<ClassStats> per_class;
  std::vector<int> confusion_labels;
  std::vector<std::vector<std::size_t>> confusion;  // gold x predicted
  std::vector<std::string> warnings;
  std::vector<std::string> skipped_words;
};

/// Stratified k-fold cross-validation: fits on each training fold (feature
/// standardization included), pools the out-of-fold predictions, and scores
/// them once. Deterministic given seed.
EvalReport cross_validate(const FeatureMatrix& data, std::size_t k, double l2, std::uint64_t seed);

void write_report_tsv(std::ostream& out, const EvalReport& report);
std::string format_report(const EvalReport& report);

}  // namespace shiftscan
