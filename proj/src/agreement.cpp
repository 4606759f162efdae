#include "shiftscan/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shiftscan/error.hpp"

namespace shiftscan {

const char* agreement_metric_name(AgreementMetric m) {
  switch (m) {
    case AgreementMetric::interval: return "interval";
    case AgreementMetric::nominal: return "nominal";
    case AgreementMetric::ordinal: return "ordinal";
  }
  return "?";
}

std::optional<AgreementMetric> agreement_metric_from_name(const std::string& name) {
  if (name == "interval") return AgreementMetric::interval;
  if (name == "nominal") return AgreementMetric::nominal;
  if (name == "ordinal") return AgreementMetric::ordinal;
  return std::nullopt;
}

AgreementReport krippendorff_alpha(const RatingsGrid& grid, AgreementMetric metric) {
  // Distinct values in ascending order -> index
  std::map<double, std::size_t> value_index;
  for (const auto& row : grid.cells) {
    for (const auto& cell : row) {
      if (cell) value_index.emplace(*cell, 0);
    }
  }
  std::size_t next = 0;
  for (auto& [value, idx] : value_index) idx = next++;
  const std::size_t v = value_index.size();
  std::vector<double> values(v);
  for (const auto& [value, idx] : value_index) values[idx] = value;

  // Coincidence matrix: each item with m>=2 ratings contributes every
  // ordered rating pair with weight 1/(m-1).
  std::vector<std::vector<double>> coincidence(v, std::vector<double>(v, 0.0));
  std::size_t usable_items = 0;
  std::size_t annotators = 0;
  for (const auto& row : grid.cells) {
    annotators = std::max(annotators, row.size());
    std::vector<std::size_t> present;
    for (const auto& cell : row) {
      if (cell) present.push_back(value_index.at(*cell));
    }
    if (present.size() < 2) continue;
    ++usable_items;
    const double weight = 1.0 / static_cast<double>(present.size() - 1);
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = 0; b < present.size(); ++b) {
        if (a != b) coincidence[present[a]][present[b]] += weight;
      }
    }
  }
  if (usable_items < 2) throw DataError("need at least 2 items with 2 or more ratings");

  std::vector<double> marginals(v, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = 0; b < v; ++b) marginals[a] += coincidence[a][b];
    total += marginals[a];
  }

  const auto delta_sq = [&](std::size_t a, std::size_t b) -> double {
    if (a == b) return 0.0;
    switch (metric) {
      case AgreementMetric::nominal:
        return 1.0;
      case AgreementMetric::interval: {
        const double d = values[a] - values[b];
        return d * d;
      }
      case AgreementMetric::ordinal: {
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        double cum = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) cum += marginals[g];
        cum -= (marginals[lo] + marginals[hi]) / 2.0;
        return cum * cum;
      }
    }
    return 0.0;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = 0; b < v; ++b) {
      const double d2 = delta_sq(a, b);
      observed += coincidence[a][b] * d2;
      expected += marginals[a] * marginals[b] * d2;
    }
  }
  observed /= total;
  expected /= total * (total - 1.0);

  AgreementReport report;
  report.annotator_count = annotators;
  report.item_count = usable_items;
  report.metric_kind = metric;
  report.alpha = expected <= 0.0 ? 1.0 : 1.0 - observed / expected;
  return report;
}

}  // namespace shiftscan
