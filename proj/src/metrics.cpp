#include "shiftscan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include "shiftscan/error.hpp"
#include "shiftscan/kernels.hpp"
#include "shiftscan/rng.hpp"
#include "shiftscan/svd.hpp"
#include "shiftscan/textutil.hpp"

namespace shiftscan {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::procrustes: return "procrustes";
    case Metric::global_anchors: return "global_anchors";
    case Metric::jaccard: return "jaccard";
    case Metric::kendall: return "kendall";
  }
  return "?";
}

std::optional<Metric> metric_from_name(const std::string& name) {
  if (name == "procrustes") return Metric::procrustes;
  if (name == "global_anchors" || name == "ga") return Metric::global_anchors;
  if (name == "jaccard") return Metric::jaccard;
  if (name == "kendall") return Metric::kendall;
  return std::nullopt;
}

std::vector<Metric> all_metrics() {
  return {Metric::procrustes, Metric::global_anchors, Metric::jaccard, Metric::kendall};
}

namespace {

void require_normalized(const EmbeddingModel& m) {
  if (!m.normalized) throw DataError("metric requires unit-normalized models");
}

std::size_t require_word(const EmbeddingModel& m, const std::string& word) {
  const auto pos = m.vocab.position(word);
  if (!pos) throw DataError("word '" + word + "' not in vocabulary of model '" + m.epoch_label + "'");
  return *pos;
}

double cosine(const double* a, const double* b, std::size_t n) {
  const double ab = kernels::dot(a, b, n);
  const double aa = kernels::dot(a, a, n);
  const double bb = kernels::dot(b, b, n);
  const double denom = std::sqrt(aa) * std::sqrt(bb);
  if (denom < 1e-300) throw DataError("cosine of zero-norm vector");
  return ab / denom;
}

// Anchor set shared by all words of one model pair: common vocabulary,
// optionally subsampled (seeded). The querying word is removed per call.
std::vector<std::string> anchor_set(const EmbeddingModel& m1, const EmbeddingModel& m2,
                                    const MetricConfig& cfg) {
  std::vector<std::string> anchors = common_vocab(m1, m2);
  if (cfg.anchor_subsample && *cfg.anchor_subsample < anchors.size()) {
    std::mt19937_64 rng(cfg.seed);
    rng_shuffle(anchors, rng);
    anchors.resize(*cfg.anchor_subsample);
    std::sort(anchors.begin(), anchors.end());
  }
  return anchors;
}

double global_anchors_value(const std::string& word, const EmbeddingModel& m1,
                            const EmbeddingModel& m2, const std::vector<std::string>& anchors) {
  const std::size_t p1 = require_word(m1, word);
  const std::size_t p2 = require_word(m2, word);

  std::vector<std::size_t> a1;
  std::vector<std::size_t> a2;
  a1.reserve(anchors.size());
  a2.reserve(anchors.size());
  for (const auto& a : anchors) {
    if (a == word) continue;
    a1.push_back(*m1.vocab.position(a));
    a2.push_back(*m2.vocab.position(a));
  }
  if (a1.empty()) throw DataError("empty anchor set for word '" + word + "'");

  std::vector<double> s1(a1.size());
  std::vector<double> s2(a1.size());
  const double* v1 = m1.vector_of(p1);
  const double* v2 = m2.vector_of(p2);
  const std::size_t d1 = m1.dim;
  const std::size_t d2 = m2.dim;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(kernels::thread_count())
#endif
  for (long long i = 0; i < static_cast<long long>(a1.size()); ++i) {
    s1[i] = kernels::dot(v1, m1.vector_of(a1[i]), d1);
    s2[i] = kernels::dot(v2, m2.vector_of(a2[i]), d2);
  }
  return 1.0 - cosine(s1.data(), s2.data(), s1.size());
}

double jaccard_value(const std::string& word, const EmbeddingModel& m1, const EmbeddingModel& m2,
                     std::size_t n) {
  const NeighborList l1 = neighbors(m1, word, n);
  const NeighborList l2 = neighbors(m2, word, n);
  if (l1.items.empty() && l2.items.empty()) {
    throw DataError("no neighbors for '" + word + "' in either model");
  }
  std::unordered_set<std::string> set1;
  for (const auto& [tok, sim] : l1.items) set1.insert(tok);
  std::size_t inter = 0;
  std::unordered_set<std::string> uni = set1;
  for (const auto& [tok, sim] : l2.items) {
    if (set1.count(tok)) ++inter;
    uni.insert(tok);
  }
  return static_cast<double>(uni.size() - inter) / static_cast<double>(uni.size());
}

double kendall_value(const std::string& word, const EmbeddingModel& m1, const EmbeddingModel& m2,
                     std::size_t n) {
  const NeighborList l1 = neighbors(m1, word, n);
  const NeighborList l2 = neighbors(m2, word, n);
  std::unordered_map<std::string, std::size_t> rank2;
  for (std::size_t i = 0; i < l2.items.size(); ++i) rank2.emplace(l2.items[i].first, i);

  // Shared tokens with (rank in list 1, rank in list 2); ranks are distinct
  // within each list, so tau-a applies with no tie handling.
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < l1.items.size(); ++i) {
    const auto it = rank2.find(l1.items[i].first);
    if (it != rank2.end()) shared.emplace_back(i, it->second);
  }
  const std::size_t s = shared.size();
  if (s < 2) return 0.0;

  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i + 1 < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      const bool d1 = shared[i].first < shared[j].first;
      const bool d2 = shared[i].second < shared[j].second;
      if (d1 == d2) ++concordant;
      else ++discordant;
    }
  }
  const long long pairs = static_cast<long long>(s) * static_cast<long long>(s - 1) / 2;
  return static_cast<double>(concordant - discordant) / static_cast<double>(pairs);
}

}  // namespace

AlignmentTransform procrustes_fit(const EmbeddingModel& m1, const EmbeddingModel& m2) {
  require_normalized(m1);
  require_normalized(m2);
  const std::vector<std::string> anchors = common_vocab(m1, m2);
  if (anchors.empty()) throw DataError("empty common vocabulary, cannot fit alignment");
  if (anchors.size() < m1.dim) {
    std::cerr << "warning: only " << anchors.size() << " anchors for dimensionality " << m1.dim
              << ", alignment is underdetermined\n";
  }
  if (m1.dim != m2.dim) throw DataError("models have different dimensionality");

  Matrix a(anchors.size(), m1.dim);
  Matrix b(anchors.size(), m2.dim);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double* r1 = m1.vector_of(*m1.vocab.position(anchors[i]));
    const double* r2 = m2.vector_of(*m2.vocab.position(anchors[i]));
    std::copy(r1, r1 + m1.dim, a.row(i));
    std::copy(r2, r2 + m2.dim, b.row(i));
  }
  AlignmentTransform t;
  t.w = procrustes_rotation(kernels::crossprod(a, b));
  t.source_label = m1.epoch_label;
  t.target_label = m2.epoch_label;
  t.anchor_count = anchors.size();
  return t;
}

ShiftScore procrustes_score(const std::string& word, const EmbeddingModel& m1,
                            const EmbeddingModel& m2, const AlignmentTransform& t) {
  require_normalized(m1);
  require_normalized(m2);
  const std::size_t p1 = require_word(m1, word);
  const std::size_t p2 = require_word(m2, word);
  std::vector<double> mapped(m2.dim);
  kernels::vec_mat(m1.vector_of(p1), t.w, mapped.data());
  const double value = 1.0 - cosine(mapped.data(), m2.vector_of(p2), m2.dim);
  return ShiftScore{word, Metric::procrustes, value, m1.epoch_label, m2.epoch_label};
}

ShiftScore global_anchors_score(const std::string& word, const EmbeddingModel& m1,
                                const EmbeddingModel& m2, const MetricConfig& cfg) {
  require_normalized(m1);
  require_normalized(m2);
  const auto anchors = anchor_set(m1, m2, cfg);
  const double value = global_anchors_value(word, m1, m2, anchors);
  return ShiftScore{word, Metric::global_anchors, value, m1.epoch_label, m2.epoch_label};
}

ShiftScore jaccard_distance(const std::string& word, const EmbeddingModel& m1,
                            const EmbeddingModel& m2, const MetricConfig& cfg) {
  require_word(m1, word);
  require_word(m2, word);
  const double value = jaccard_value(word, m1, m2, cfg.neighborhood);
  return ShiftScore{word, Metric::jaccard, value, m1.epoch_label, m2.epoch_label};
}

ShiftScore kendall_tau(const std::string& word, const EmbeddingModel& m1,
                       const EmbeddingModel& m2, const MetricConfig& cfg) {
  require_word(m1, word);
  require_word(m2, word);
  const double value = kendall_value(word, m1, m2, cfg.neighborhood);
  return ShiftScore{word, Metric::kendall, value, m1.epoch_label, m2.epoch_label};
}

ScoreTable score_all(const EmbeddingModel& m1, const EmbeddingModel& m2,
                     const std::vector<std::string>& words, const std::vector<Metric>& metrics,
                     const MetricConfig& cfg) {
  ScoreTable table;
  if (words.empty() || metrics.empty()) return table;

  std::vector<std::string> valid;
  valid.reserve(words.size());
  for (const auto& w : words) {
    if (!m1.vocab.contains(w)) {
      table.failures.emplace_back(w, "absent from vocabulary of model '" + m1.epoch_label + "'");
    } else if (!m2.vocab.contains(w)) {
      table.failures.emplace_back(w, "absent from vocabulary of model '" + m2.epoch_label + "'");
    } else {
      valid.push_back(w);
    }
  }
  if (valid.empty()) return table;

  const bool want_procrustes =
      std::find(metrics.begin(), metrics.end(), Metric::procrustes) != metrics.end();
  const bool want_anchors =
      std::find(metrics.begin(), metrics.end(), Metric::global_anchors) != metrics.end();
  AlignmentTransform transform;
  if (want_procrustes) transform = procrustes_fit(m1, m2);
  std::vector<std::string> anchors;
  if (want_anchors) anchors = anchor_set(m1, m2, cfg);

  const std::size_t per_word = metrics.size();
  std::vector<std::optional<ShiftScore>> slots(valid.size() * per_word);
  std::vector<std::pair<std::string, std::string>> errors(valid.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_count())
#endif
  for (long long wi = 0; wi < static_cast<long long>(valid.size()); ++wi) {
    const std::string& word = valid[static_cast<std::size_t>(wi)];
    try {
      for (std::size_t mi = 0; mi < per_word; ++mi) {
        ShiftScore score;
        switch (metrics[mi]) {
          case Metric::procrustes:
            score = procrustes_score(word, m1, m2, transform);
            break;
          case Metric::global_anchors:
            score = ShiftScore{word, Metric::global_anchors,
                               global_anchors_value(word, m1, m2, anchors), m1.epoch_label,
                               m2.epoch_label};
            break;
          case Metric::jaccard:
            score = ShiftScore{word, Metric::jaccard, jaccard_value(word, m1, m2, cfg.neighborhood),
                               m1.epoch_label, m2.epoch_label};
            break;
          case Metric::kendall:
            score = ShiftScore{word, Metric::kendall, kendall_value(word, m1, m2, cfg.neighborhood),
                               m1.epoch_label, m2.epoch_label};
            break;
        }
        slots[static_cast<std::size_t>(wi) * per_word + mi] = std::move(score);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(wi)] = {word, e.what()};
    }
  }

  for (std::size_t wi = 0; wi < valid.size(); ++wi) {
    if (!errors[wi].first.empty()) {
      table.failures.push_back(errors[wi]);
      continue;
    }
    for (std::size_t mi = 0; mi < per_word; ++mi) {
      table.scores.push_back(std::move(*slots[wi * per_word + mi]));
    }
  }
  return table;
}

void write_scores_tsv(std::ostream& out, const std::vector<ShiftScore>& scores) {
  out << "word\tmetric\tvalue\tsource_label\ttarget_label\n";
  for (const auto& s : scores) {
    out << s.word << '\t' << metric_name(s.metric) << '\t' << format_fixed6(s.value) << '\t'
        << s.source_label << '\t' << s.target_label << '\n';
  }
}

}  // namespace shiftscan
