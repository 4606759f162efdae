#include "shiftscan/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "shiftscan/error.hpp"
#include "shiftscan/kernels.hpp"
#include "shiftscan/textutil.hpp"

namespace shiftscan {

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries) {
  Vocabulary v;
  v.entries_ = std::move(entries);
  v.index_.reserve(v.entries_.size());
  for (std::size_t i = 0; i < v.entries_.size(); ++i) {
    if (!v.index_.emplace(v.entries_[i].token, i).second) {
      throw DataError("duplicate token '" + v.entries_[i].token + "' in vocabulary");
    }
  }
  return v;
}

void Vocabulary::push_back(std::string token, std::uint64_t frequency) {
  if (!index_.emplace(token, entries_.size()).second) {
    throw DataError("duplicate token '" + token + "' in vocabulary");
  }
  entries_.push_back(Entry{std::move(token), frequency});
}

std::optional<std::size_t> Vocabulary::position(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string path_stem(const std::filesystem::path& p) { return p.stem().string(); }

}  // namespace

EmbeddingModel load_embeddings(const std::filesystem::path& path, const std::string& epoch_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file, expected 'V d' header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_ws(line);
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  try {
    if (header.size() != 2) throw std::invalid_argument("field count");
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    vocab_size = std::stoull(header[0], &used1);
    dim = std::stoull(header[1], &used2);
    if (used1 != header[0].size() || used2 != header[1].size()) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw DataError(path.string() + ": malformed header '" + line + "', expected 'V d'");
  }
  if (dim == 0) throw DataError(path.string() + ": dimensionality must be positive");

  EmbeddingModel model;
  model.dim = dim;
  model.vectors = Matrix(vocab_size, dim);
  model.epoch_label = epoch_label.empty() ? path_stem(path) : epoch_label;

  for (std::size_t row = 0; row < vocab_size; ++row) {
    const std::size_t line_no = row + 2;
    if (!std::getline(in, line)) {
      throw DataError(path.string() + ": expected " + std::to_string(vocab_size) +
                      " vector rows, file ends after " + std::to_string(row));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_ws(line);
    if (fields.size() != dim + 1) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected token plus " +
                      std::to_string(dim) + " values, got " + std::to_string(fields.size()) + " fields");
    }
    double* dst = model.vectors.row(row);
    for (std::size_t j = 0; j < dim; ++j) {
      try {
        std::size_t used = 0;
        dst[j] = std::stod(fields[j + 1], &used);
        if (used != fields[j + 1].size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw DataError(path.string() + " line " + std::to_string(line_no) + ": bad value '" +
                        fields[j + 1] + "'");
      }
    }
    try {
      model.vocab.push_back(fields[0], 0);
    } catch (const DataError&) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": duplicate token '" +
                      fields[0] + "'");
    }
  }
  return model;
}

void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding file: " + path.string());

  out << model.vocab.size() << ' ' << model.dim << '\n';
  std::string line;
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    const std::string& token = model.vocab.token(i);
    if (token.empty() || token.find_first_of(" \t\n\r") != std::string::npos) {
      throw DataError("token not serializable in text format: '" + token + "'");
    }
    line = token;
    const double* row = model.vectors.row(i);
    for (std::size_t j = 0; j < model.dim; ++j) {
      line += ' ';
      line += format_fixed6(row[j]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw DataError("write failed: " + path.string());
}

EmbeddingModel unit_normalize(const EmbeddingModel& model) {
  if (model.normalized) return model;
  EmbeddingModel out = model;
  for (std::size_t i = 0; i < out.vocab.size(); ++i) {
    double* row = out.vectors.row(i);
    const double norm = std::sqrt(kernels::dot(row, row, out.dim));
    if (norm < 1e-12) {
      throw DataError("zero-norm vector for token '" + out.vocab.token(i) + "'");
    }
    for (std::size_t j = 0; j < out.dim; ++j) row[j] /= norm;
  }
  out.normalized = true;
  return out;
}

NeighborList neighbors(const EmbeddingModel& model, const std::string& word, std::size_t n) {
  if (!model.normalized) throw DataError("neighbors requires a unit-normalized model");
  const auto pos = model.vocab.position(word);
  if (!pos) throw DataError("word not in vocabulary: '" + word + "'");

  const std::size_t vocab_size = model.vocab.size();
  std::vector<double> sims(vocab_size);
  kernels::row_dots(model.vectors, model.vectors.row(*pos), sims.data());

  std::vector<std::size_t> order;
  order.reserve(vocab_size > 0 ? vocab_size - 1 : 0);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (i != *pos) order.push_back(i);
  }
  const auto better = [&sims](std::size_t a, std::size_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    return a < b;
  };
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);

  NeighborList list;
  list.query = word;
  list.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    list.items.emplace_back(model.vocab.token(order[i]), sims[order[i]]);
  }
  return list;
}

std::vector<std::string> common_vocab(const EmbeddingModel& m1, const EmbeddingModel& m2) {
  std::vector<std::string> out;
  for (const auto& e : m1.vocab.entries()) {
    if (m2.vocab.contains(e.token)) out.push_back(e.token);
  }
  return out;
}

}  // namespace shiftscan
