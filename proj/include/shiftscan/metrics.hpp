#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shiftscan/embedding.hpp"
#include "shiftscan/matrix.hpp"

namespace shiftscan {

enum class Metric { procrustes, global_anchors, jaccard, kendall };

const char* metric_name(Metric m);
std::optional<Metric> metric_from_name(const std::string& name);
std::vector<Metric> all_metrics();

struct MetricConfig {
  std::size_t neighborhood = 10;                 // top-n list size
  std::optional<std::size_t> anchor_subsample;   // none = full intersection
  std::uint64_t seed = 42;                       // drives the anchor subsample
};

/// Orthogonal map W (d x d) fitted on the common vocabulary so that rows of
/// the source model times W approximate the target model's rows.
struct AlignmentTransform {
  Matrix w;
  std::string source_label;
  std::string target_label;
  std::size_t anchor_count = 0;
};

struct ShiftScore {
  std::string word;
  Metric metric;
  double value;
  std::string source_label;
  std::string target_label;
};

/// Least-squares orthogonal alignment of m1 onto m2 over their common
/// vocabulary, via SVD of the anchor cross-covariance. Both models must
/// be unit-normalized. Warns to stderr when there are fewer anchors than
/// dimensions.
AlignmentTransform procrustes_fit(const EmbeddingModel& m1, const EmbeddingModel& m2);

/// 1 - cos(v1 * W, v2); range [0, 2].
ShiftScore procrustes_score(const std::string& word, const EmbeddingModel& m1,
                            const EmbeddingModel& m2, const AlignmentTransform& t);

/// 1 - cos(s1, s2) where s_i is the vector of similarities of `word` to the
/// anchor set (common vocabulary minus the word itself) in model i.
ShiftScore global_anchors_score(const std::string& word, const EmbeddingModel& m1,
                                const EmbeddingModel& m2, const MetricConfig& cfg);

/// (|N1 u N2| - |N1 n N2|) / |N1 u N2| over top-n neighbor token sets.
ShiftScore jaccard_distance(const std::string& word, const EmbeddingModel& m1,
                            const EmbeddingModel& m2, const MetricConfig& cfg);

/// Kendall tau-a over the shared neighbors' ranks in the two lists;
/// 0 when the intersection has fewer than 2 tokens.
ShiftScore kendall_tau(const std::string& word, const EmbeddingModel& m1,
                       const EmbeddingModel& m2, const MetricConfig& cfg);

struct ScoreTable {
  std::vector<ShiftScore> scores;
  // (word, reason) for words that could not be scored; never silently dropped.
  std::vector<std::pair<std::string, std::string>> failures;
};

/// Scores every word under every requested metric. The Procrustes transform
/// is fitted once and reused; words are scored in parallel.
ScoreTable score_all(const EmbeddingModel& m1, const EmbeddingModel& m2,
                     const std::vector<std::string>& words, const std::vector<Metric>& metrics,
                     const MetricConfig& cfg);

/// TSV with header: word, metric, value (6 decimals), source_label, target_label.
void write_scores_tsv(std::ostream& out, const std::vector<ShiftScore>& scores);

}  // namespace shiftscan
