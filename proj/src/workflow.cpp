#include "shiftscan/workflow.hpp"

#include <algorithm>

#include "shiftscan/error.hpp"

namespace shiftscan {

std::optional<EvalMethod> eval_method_from_name(const std::string& name) {
  EvalMethod m;
  if (name == "combined") {
    m.combined = true;
    return m;
  }
  if (const auto metric = metric_from_name(name)) {
    m.single = *metric;
    return m;
  }
  return std::nullopt;
}

DirModelProvider::DirModelProvider(std::filesystem::path dir, std::string regime)
    : dir_(std::move(dir)), regime_(std::move(regime)) {}

const EmbeddingModel& DirModelProvider::get(const std::string& label) {
  const auto it = cache_.find(label);
  if (it != cache_.end()) return *it->second;

  // An incremental chain starts from a static model, so that name is the
  // last fallback for the chain's first bin.
  std::vector<std::filesystem::path> candidates = {dir_ / (label + "_" + regime_ + ".vec"),
                                                   dir_ / (label + ".vec")};
  if (regime_ != "static") candidates.push_back(dir_ / (label + "_static.vec"));
  std::filesystem::path chosen;
  for (const auto& candidate : candidates) {
    if (std::filesystem::exists(candidate)) {
      chosen = candidate;
      break;
    }
  }
  if (chosen.empty()) {
    std::string looked;
    for (const auto& candidate : candidates) {
      if (!looked.empty()) looked += ", ";
      looked += candidate.filename().string();
    }
    throw DataError("no model for epoch '" + label + "' in " + dir_.string() + " (looked for " +
                    looked + ")");
  }
  auto model = std::make_shared<EmbeddingModel>(unit_normalize(load_embeddings(chosen, label)));
  return *cache_.emplace(label, std::move(model)).first->second;
}

ModelProvider DirModelProvider::as_provider() {
  return [this](const std::string& label) -> const EmbeddingModel& { return get(label); };
}

FeatureMatrix build_features(const std::vector<GoldEntry>& entries, const ModelProvider& models,
                             const EvalMethod& method, const MetricConfig& cfg,
                             std::vector<std::string>* skipped_words) {
  const std::vector<Metric> metrics = method.metrics();

  // Group row indices by model pair so each pair is scored in one pass.
  std::vector<std::pair<std::string, std::string>> pair_order;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_pair;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto key = std::make_pair(entries[i].source_label, entries[i].target_label);
    auto& rows = by_pair[key];
    if (rows.empty()) pair_order.push_back(key);
    rows.push_back(i);
  }

  std::vector<std::optional<std::vector<double>>> feature_rows(entries.size());
  for (const auto& pair : pair_order) {
    const EmbeddingModel& m1 = models(pair.first);
    const EmbeddingModel& m2 = models(pair.second);
    const std::vector<std::size_t>& rows = by_pair[pair];
    std::vector<std::string> words;
    words.reserve(rows.size());
    for (const std::size_t r : rows) {
      if (std::find(words.begin(), words.end(), entries[r].word) == words.end()) {
        words.push_back(entries[r].word);
      }
    }

    const ScoreTable table = score_all(m1, m2, words, metrics, cfg);
    std::map<std::string, std::vector<double>> values;
    for (const auto& s : table.scores) {
      auto& row = values[s.word];
      if (row.empty()) row.reserve(metrics.size());
      row.push_back(s.value);
    }
    for (const std::size_t r : rows) {
      const auto it = values.find(entries[r].word);
      if (it != values.end() && it->second.size() == metrics.size()) {
        feature_rows[r] = it->second;
      } else if (skipped_words) {
        skipped_words->push_back(entries[r].word + " (" + pair.first + "-" + pair.second + ")");
      }
    }
  }

  FeatureMatrix data;
  for (const Metric m : metrics) data.feature_names.emplace_back(metric_name(m));
  std::size_t kept = 0;
  for (const auto& row : feature_rows) kept += row.has_value() ? 1 : 0;
  data.x = Matrix(kept, metrics.size());
  data.labels.reserve(kept);
  data.word_ids.reserve(kept);
  std::size_t out_row = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!feature_rows[i]) continue;
    std::copy(feature_rows[i]->begin(), feature_rows[i]->end(), data.x.row(out_row));
    data.labels.push_back(entries[i].quantized_class);
    data.word_ids.push_back(entries[i].word);
    ++out_row;
  }
  return data;
}

EvalReport evaluate_gold(const std::vector<GoldEntry>& entries, const ModelProvider& models,
                         const EvaluateOptions& options) {
  if (entries.empty()) throw DataError("empty gold dataset");
  std::vector<std::string> skipped;
  const FeatureMatrix data = build_features(entries, models, options.method, options.metric_cfg,
                                            &skipped);
  if (data.x.rows() == 0) throw DataError("no gold entry could be scored against the models");

  EvalReport report = cross_validate(data, options.folds, options.l2, options.seed);
  report.method = options.method.name();
  report.regime = options.regime;
  report.skipped_words = std::move(skipped);
  return report;
}

}  // namespace shiftscan
