#pragma once

#include <optional>
#include <string>
#include <vector>

namespace shiftscan {

enum class AgreementMetric { interval, nominal, ordinal };

const char* agreement_metric_name(AgreementMetric m);
std::optional<AgreementMetric> agreement_metric_from_name(const std::string& name);

/// Items x annotators score grid; missing cells allowed.
struct RatingsGrid {
  std::vector<std::vector<std::optional<double>>> cells;
};

struct AgreementReport {
  double alpha = 0.0;
  std::size_t annotator_count = 0;
  std::size_t item_count = 0;  // items with at least 2 ratings
  AgreementMetric metric_kind = AgreementMetric::interval;
};

/// Krippendorff's alpha, coincidence-matrix formulation. Items with fewer
/// than 2 ratings are ignored; at least 2 usable items required. When the
/// expected disagreement is zero (all values identical) alpha is 1.
AgreementReport krippendorff_alpha(const RatingsGrid& grid, AgreementMetric metric);

}  // namespace shiftscan
