#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "shiftscan/dataset.hpp"
#include "shiftscan/eval.hpp"
#include "shiftscan/metrics.hpp"

namespace shiftscan {

/// Scoring method for the evaluation workflow: one metric, or all four as a
/// combined feature set.
struct EvalMethod {
  bool combined = false;
  Metric single = Metric::procrustes;

  std::vector<Metric> metrics() const { return combined ? all_metrics() : std::vector<Metric>{single}; }
  std::string name() const { return combined ? "combined" : metric_name(single); }
};

std::optional<EvalMethod> eval_method_from_name(const std::string& name);

/// Supplies a unit-normalized model per epoch label.
using ModelProvider = std::function<const EmbeddingModel&(const std::string& label)>;

/// Loads "<label>_<regime>.vec" (falling back to "<label>.vec") from a
/// directory, normalizes, and caches.
class DirModelProvider {
 public:
  DirModelProvider(std::filesystem::path dir, std::string regime);
  const EmbeddingModel& get(const std::string& label);
  ModelProvider as_provider();

 private:
  std::filesystem::path dir_;
  std::string regime_;
  std::map<std::string, std::shared_ptr<EmbeddingModel>> cache_;
};

struct EvaluateOptions {
  EvalMethod method;
  std::string regime = "static";
  std::size_t folds = 9;
  double l2 = 1.0;
  MetricConfig metric_cfg;
  std::uint64_t seed = 42;
};

/// Features for every gold entry under the method's metrics, rows in gold
/// order; entries missing from either model are recorded in
/// `skipped_words`, not silently dropped.
FeatureMatrix build_features(const std::vector<GoldEntry>& entries, const ModelProvider& models,
                             const EvalMethod& method, const MetricConfig& cfg,
                             std::vector<std::string>* skipped_words);

/// The full evaluation protocol: per-pair shift features, one classifier per
/// training fold, pooled out-of-fold predictions, macro-averaged F1.
EvalReport evaluate_gold(const std::vector<GoldEntry>& entries, const ModelProvider& models,
                         const EvaluateOptions& options);

}  // namespace shiftscan
