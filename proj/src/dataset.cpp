#include "shiftscan/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "shiftscan/error.hpp"
#include "shiftscan/rng.hpp"
#include "shiftscan/textutil.hpp"

namespace shiftscan {

const char* origin_name(GoldEntry::Origin o) {
  switch (o) {
    case GoldEntry::Origin::seed: return "seed";
    case GoldEntry::Origin::filler: return "filler";
    case GoldEntry::Origin::unknown: return "unknown";
  }
  return "?";
}

int quantize(int s1, int s2, int s3) {
  for (const int s : {s1, s2, s3}) {
    if (s < 0 || s > 2) throw DataError("annotator score out of range {0,1,2}: " + std::to_string(s));
  }
  const int sum = s1 + s2 + s3;
  return (2 * sum + 3) / 6;  // round(sum/3) in exact integer arithmetic
}

namespace {

const char* kGoldHeader = "word\tpos\tsource_label\ttarget_label\tscore1\tscore2\tscore3\tclass\torigin";

int parse_int_field(const std::string& field, std::size_t line_no, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw DataError("gold TSV line " + std::to_string(line_no) + ": bad " + what + " '" + field + "'");
  }
}

}  // namespace

std::vector<GoldEntry> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open gold dataset: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kGoldHeader) {
    throw DataError(path.string() + ": bad header, expected '" + std::string(kGoldHeader) + "'");
  }

  std::vector<GoldEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 9) {
      throw DataError("gold TSV line " + std::to_string(line_no) + ": expected 9 columns, got " +
                      std::to_string(cols.size()));
    }
    GoldEntry e;
    e.line = line_no;
    e.word = cols[0];
    e.pos = cols[1];
    e.source_label = cols[2];
    e.target_label = cols[3];
    if (e.word.empty()) throw DataError("gold TSV line " + std::to_string(line_no) + ": empty word");

    const bool s1 = !cols[4].empty();
    const bool s2 = !cols[5].empty();
    const bool s3 = !cols[6].empty();
    if (s1 != s2 || s2 != s3) {
      throw DataError("gold TSV line " + std::to_string(line_no) +
                      ": scores must be all present or all absent");
    }
    if (s1) {
      std::array<int, 3> scores{};
      for (int i = 0; i < 3; ++i) {
        scores[static_cast<std::size_t>(i)] =
            parse_int_field(cols[4 + static_cast<std::size_t>(i)], line_no, "score");
        if (scores[static_cast<std::size_t>(i)] < 0 || scores[static_cast<std::size_t>(i)] > 2) {
          throw DataError("gold TSV line " + std::to_string(line_no) + ": score out of range {0,1,2}");
        }
      }
      e.scores = scores;
    }

    e.quantized_class = parse_int_field(cols[7], line_no, "class");
    if (e.scores) {
      if (e.quantized_class < 0 || e.quantized_class > 2) {
        throw DataError("gold TSV line " + std::to_string(line_no) + ": class out of range {0,1,2}");
      }
    } else if (e.quantized_class != 0 && e.quantized_class != 1) {
      throw DataError("gold TSV line " + std::to_string(line_no) +
                      ": class must be 0 or 1 when scores are absent");
    }

    if (cols[8] == "seed") e.origin = GoldEntry::Origin::seed;
    else if (cols[8] == "filler") e.origin = GoldEntry::Origin::filler;
    else if (cols[8] == "unknown") e.origin = GoldEntry::Origin::unknown;
    else {
      throw DataError("gold TSV line " + std::to_string(line_no) + ": bad origin '" + cols[8] + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_gold(const std::vector<GoldEntry>& entries, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write gold dataset: " + path.string());
  out << kGoldHeader << '\n';
  for (const auto& e : entries) {
    out << e.word << '\t' << e.pos << '\t' << e.source_label << '\t' << e.target_label << '\t';
    if (e.scores) {
      out << (*e.scores)[0] << '\t' << (*e.scores)[1] << '\t' << (*e.scores)[2] << '\t';
    } else {
      out << "\t\t\t";
    }
    out << e.quantized_class << '\t' << origin_name(e.origin) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

DatasetSummary validate_dataset(const std::vector<GoldEntry>& entries) {
  DatasetSummary summary;
  summary.total = entries.size();
  for (const auto& e : entries) {
    summary.per_class[e.quantized_class] += 1;
    summary.per_pair[e.source_label + "-" + e.target_label] += 1;
    summary.per_pos[e.pos] += 1;
    if (e.scores) {
      const int expected = quantize((*e.scores)[0], (*e.scores)[1], (*e.scores)[2]);
      if (expected != e.quantized_class) {
        summary.quantization_mismatches.push_back(
            e.word + " (" + e.source_label + "-" + e.target_label + "): recorded class " +
            std::to_string(e.quantized_class) + ", scores give " + std::to_string(expected));
      }
    }
  }
  return summary;
}

RatingsGrid ratings_grid(const std::vector<GoldEntry>& entries) {
  RatingsGrid grid;
  for (const auto& e : entries) {
    if (!e.scores) continue;
    std::vector<std::optional<double>> row;
    row.reserve(3);
    for (const int s : *e.scores) row.emplace_back(static_cast<double>(s));
    grid.cells.push_back(std::move(row));
  }
  return grid;
}

CandidateResult generate_candidates(const EmbeddingModel& m1, const EmbeddingModel& m2,
                                    const std::string& pos_filter, std::size_t k,
                                    const MetricConfig& cfg) {
  const std::string suffix = "_" + pos_filter;
  std::vector<std::string> eligible;
  for (const auto& token : common_vocab(m1, m2)) {
    if (token.size() > suffix.size() &&
        token.compare(token.size() - suffix.size(), suffix.size(), suffix) == 0) {
      eligible.push_back(token);
    }
  }

  CandidateResult result;
  if (eligible.empty()) {
    result.warnings.push_back("no shared words with POS '" + pos_filter + "'");
    return result;
  }

  const ScoreTable table = score_all(m1, m2, eligible, {Metric::global_anchors}, cfg);
  for (const auto& [word, reason] : table.failures) {
    result.warnings.push_back("could not score '" + word + "': " + reason);
  }
  std::vector<std::pair<double, std::string>> ranked;
  ranked.reserve(table.scores.size());
  double max_score = 0.0;
  for (const auto& s : table.scores) {
    ranked.emplace_back(s.value, s.word);
    max_score = std::max(max_score, s.value);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (max_score <= 1e-12) {
    result.warnings.push_back("all shift scores are zero; candidate ranking is degenerate");
  }
  if (ranked.size() < k) {
    result.warnings.push_back("only " + std::to_string(ranked.size()) + " eligible words for k=" +
                              std::to_string(k));
  }
  const std::size_t take = std::min(k, ranked.size());
  for (std::size_t i = 0; i < take; ++i) result.words.push_back(ranked[i].second);
  return result;
}

FillerResult sample_fillers(const std::vector<std::string>& seeds, const Vocabulary& freq,
                            const std::string& pos_filter, std::size_t per_seed,
                            std::uint64_t seed) {
  const std::string suffix = "_" + pos_filter;
  // Frequency-ranked pool of same-POS tokens; Vocabulary order is already
  // descending frequency.
  std::vector<std::string> pool;
  for (const auto& e : freq.entries()) {
    if (e.token.size() > suffix.size() &&
        e.token.compare(e.token.size() - suffix.size(), suffix.size(), suffix) == 0) {
      pool.push_back(e.token);
    }
  }
  if (pool.empty()) throw DataError("frequency table has no words with POS '" + pos_filter + "'");

  const auto tier_of = [&pool](std::size_t rank) { return rank * 10 / pool.size(); };
  std::map<std::string, std::size_t> rank_by_token;
  for (std::size_t i = 0; i < pool.size(); ++i) rank_by_token.emplace(pool[i], i);

  std::vector<bool> taken(pool.size(), false);
  for (const auto& s : seeds) {
    const auto it = rank_by_token.find(s);
    if (it != rank_by_token.end()) taken[it->second] = true;
  }

  FillerResult result;
  std::mt19937_64 rng(seed);
  for (const auto& s : seeds) {
    const auto it = rank_by_token.find(s);
    if (it == rank_by_token.end()) {
      throw DataError("seed word '" + s + "' not found in the frequency table");
    }
    const std::size_t seed_tier = tier_of(it->second);
    for (std::size_t draw = 0; draw < per_seed; ++draw) {
      std::vector<std::size_t> available;
      std::size_t width = 0;
      for (; width <= 10; ++width) {
        available.clear();
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (taken[i]) continue;
          const std::size_t t = tier_of(i);
          const std::size_t dist = t > seed_tier ? t - seed_tier : seed_tier - t;
          if (dist <= width) available.push_back(i);
        }
        if (!available.empty()) break;
      }
      if (available.empty()) {
        throw DataError("candidate pool exhausted while sampling fillers for '" + s + "'");
      }
      if (width > 0) {
        result.warnings.push_back("tier of '" + s + "' exhausted; widened to distance " +
                                  std::to_string(width));
      }
      const std::size_t pick = available[rng_index(rng, available.size())];
      taken[pick] = true;
      result.words.push_back(pool[pick]);
    }
  }
  return result;
}

std::array<BinContexts, 2> sample_contexts(const TimeBinCorpus& c1, const TimeBinCorpus& c2,
                                           const std::string& word, std::size_t per_bin,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto sample_one = [&rng, &word, per_bin](const TimeBinCorpus& corpus) {
    BinContexts out;
    out.epoch_label = corpus.epoch_label;
    std::vector<std::size_t> containing;
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
      const auto& s = corpus.sentences[i];
      if (std::find(s.begin(), s.end(), word) != s.end()) containing.push_back(i);
    }
    out.exhausted = containing.size() < per_bin;
    // partial Fisher-Yates: first `take` entries are a uniform sample
    const std::size_t take = std::min(per_bin, containing.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_index(rng, containing.size() - i));
      std::swap(containing[i], containing[j]);
    }
    for (std::size_t i = 0; i < take; ++i) {
      const auto& s = corpus.sentences[containing[i]];
      std::string joined;
      for (std::size_t t = 0; t < s.size(); ++t) {
        if (t > 0) joined += ' ';
        joined += s[t];
      }
      out.sentences.push_back(std::move(joined));
    }
    return out;
  };
  return {sample_one(c1), sample_one(c2)};
}

}  // namespace shiftscan
