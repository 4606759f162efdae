#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shiftscan/matrix.hpp"
#include "shiftscan/trainconfig.hpp"

namespace shiftscan {

/// Ordered token list with frequencies and a token -> position index.
/// Tokens are unique; positions are contiguous 0..V-1.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint64_t frequency = 0;
  };

  Vocabulary() = default;

  /// Throws DataError on duplicate tokens.
  static Vocabulary from_entries(std::vector<Entry> entries);

  void push_back(std::string token, std::uint64_t frequency);

  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  std::optional<std::size_t> position(const std::string& token) const;
  const std::string& token(std::size_t pos) const { return entries_[pos].token; }
  std::uint64_t frequency(std::size_t pos) const { return entries_[pos].frequency; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One time bin's embedding model: vocabulary plus a V x d vector matrix.
/// Immutable by convention once loaded or normalized; all queries are const.
struct EmbeddingModel {
  Vocabulary vocab;
  Matrix vectors;  // V x d
  std::size_t dim = 0;
  bool normalized = false;
  std::string epoch_label;
  std::optional<TrainConfig> train_meta;
  // Output (context) matrix from training; kept in memory so incremental
  // training can continue from full state. Not part of the text format.
  std::optional<Matrix> output_vectors;

  const double* vector_of(std::size_t pos) const { return vectors.row(pos); }
};

/// Ranked nearest-neighbor list, similarities descending, query excluded.
struct NeighborList {
  std::string query;
  std::vector<std::pair<std::string, double>> items;
};

/// Text format: header "V d", then V lines "token v1 .. vd", 6-decimal
/// values, single spaces, LF endings, no trailing whitespace.
EmbeddingModel load_embeddings(const std::filesystem::path& path,
                               const std::string& epoch_label = "");
void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path);

/// Returns a copy with every row scaled to unit Euclidean norm.
/// Throws DataError naming the token if a row has (near-)zero norm.
EmbeddingModel unit_normalize(const EmbeddingModel& model);

/// Top-n tokens by cosine similarity to `word`, excluding `word` itself.
/// Ties broken by ascending vocabulary position. Model must be normalized.
NeighborList neighbors(const EmbeddingModel& model, const std::string& word, std::size_t n);

/// Vocabulary intersection in m1's order.
std::vector<std::string> common_vocab(const EmbeddingModel& m1, const EmbeddingModel& m2);

}  // namespace shiftscan
