#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shiftscan/agreement.hpp"
#include "shiftscan/conllu.hpp"
#include "shiftscan/embedding.hpp"
#include "shiftscan/metrics.hpp"

namespace shiftscan {

/// One annotated row of a gold dataset. Ternary datasets carry the three
/// per-annotator scores; binary ones leave them absent.
struct GoldEntry {
  enum class Origin { seed, filler, unknown };

  std::string word;
  std::string pos;
  std::string source_label;
  std::string target_label;
  std::optional<std::array<int, 3>> scores;
  int quantized_class = 0;
  Origin origin = Origin::unknown;
  std::size_t line = 0;  // source line in the TSV, for reporting
};

const char* origin_name(GoldEntry::Origin o);

struct DatasetSummary {
  std::size_t total = 0;
  std::map<int, std::size_t> per_class;
  std::map<std::string, std::size_t> per_pair;  // "source-target"
  std::map<std::string, std::size_t> per_pos;
  // entries whose recorded class disagrees with quantize(scores)
  std::vector<std::string> quantization_mismatches;
};

/// Round the mean of three annotator scores in {0,1,2} to the nearest
/// integer class. Exact integer arithmetic; the 3-annotator means never
/// land on .5 so no tie rule is needed.
int quantize(int s1, int s2, int s3);

/// Gold TSV schema (header required):
/// word pos source_label target_label score1 score2 score3 class origin
std::vector<GoldEntry> load_gold(const std::filesystem::path& path);
void save_gold(const std::vector<GoldEntry>& entries, const std::filesystem::path& path);
DatasetSummary validate_dataset(const std::vector<GoldEntry>& entries);

/// Per-annotator score grid of the entries that carry scores.
RatingsGrid ratings_grid(const std::vector<GoldEntry>& entries);

struct CandidateResult {
  std::vector<std::string> words;
  std::vector<std::string> warnings;
};

/// The k words with POS suffix `pos_filter` shared by both models that have
/// the highest global-anchors shift, descending, ties by token string.
CandidateResult generate_candidates(const EmbeddingModel& m1, const EmbeddingModel& m2,
                                    const std::string& pos_filter, std::size_t k,
                                    const MetricConfig& cfg);

struct FillerResult {
  std::vector<std::string> words;
  std::vector<std::string> warnings;
};

/// For each seed, per_seed same-POS words drawn uniformly (seeded) from the
/// seed's frequency tier (decile of frequency rank within the POS-filtered
/// vocabulary), excluding seeds and already chosen fillers. Exhausted tiers
/// widen to adjacent tiers with a warning.
FillerResult sample_fillers(const std::vector<std::string>& seeds, const Vocabulary& freq,
                            const std::string& pos_filter, std::size_t per_seed,
                            std::uint64_t seed);

struct BinContexts {
  std::string epoch_label;
  std::vector<std::string> sentences;
  bool exhausted = false;  // fewer containing sentences than requested
};

/// Uniform seeded sample of up to per_bin sentences containing `word` from
/// each corpus.
std::array<BinContexts, 2> sample_contexts(const TimeBinCorpus& c1, const TimeBinCorpus& c2,
                                           const std::string& word, std::size_t per_bin,
                                           std::uint64_t seed);

}  // namespace shiftscan
