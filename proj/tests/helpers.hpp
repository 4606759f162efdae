#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "reference/reference.hpp"
#include "shiftscan/embedding.hpp"
#include "shiftscan/matrix.hpp"
#include "shiftscan/rng.hpp"

namespace testhelpers {

inline double gaussian(std::mt19937_64& rng) {
  // Box-Muller on the toolkit's portable uniform draws
  const double u1 = shiftscan::rng_real(rng);
  const double u2 = shiftscan::rng_real(rng);
  return std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(6.283185307179586 * u2);
}

/// Random unnormalized model with tokens w0..w{v-1}.
inline shiftscan::EmbeddingModel random_model(std::size_t v, std::size_t d, std::uint64_t seed,
                                              const std::string& label = "m") {
  std::mt19937_64 rng(seed);
  shiftscan::EmbeddingModel m;
  m.dim = d;
  m.vectors = shiftscan::Matrix(v, d);
  m.epoch_label = label;
  for (std::size_t i = 0; i < v; ++i) {
    m.vocab.push_back("w" + std::to_string(i), 1);
    for (std::size_t j = 0; j < d; ++j) m.vectors.at(i, j) = gaussian(rng);
  }
  return m;
}

/// Random orthogonal d x d matrix via Gram-Schmidt on a Gaussian matrix.
inline shiftscan::Matrix random_rotation(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  shiftscan::Matrix q(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<double> v(d);
    for (auto& x : v) x = gaussian(rng);
    for (std::size_t prev = 0; prev < col; ++prev) {
      double proj = 0.0;
      for (std::size_t k = 0; k < d; ++k) proj += v[k] * q.at(k, prev);
      for (std::size_t k = 0; k < d; ++k) v[k] -= proj * q.at(k, prev);
    }
    double norm = 0.0;
    for (const double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < d; ++k) q.at(k, col) = v[k] / norm;
  }
  return q;
}

/// Apply a shared right-multiplication to every row: rows' = rows * r.
inline shiftscan::EmbeddingModel rotate_model(const shiftscan::EmbeddingModel& m,
                                              const shiftscan::Matrix& r) {
  shiftscan::EmbeddingModel out = m;
  for (std::size_t i = 0; i < m.vocab.size(); ++i) {
    for (std::size_t j = 0; j < m.dim; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.dim; ++k) s += m.vectors.at(i, k) * r.at(k, j);
      out.vectors.at(i, j) = s;
    }
  }
  return out;
}

inline reference::SimpleModel to_reference(const shiftscan::EmbeddingModel& m) {
  reference::SimpleModel out;
  for (std::size_t i = 0; i < m.vocab.size(); ++i) {
    out.tokens.push_back(m.vocab.token(i));
    out.rows.emplace_back(m.vectors.row(i), m.vectors.row(i) + m.dim);
  }
  return out;
}

inline std::vector<std::vector<double>> to_nested(const shiftscan::Matrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i), m.row(i) + m.cols());
  return out;
}

/// Fresh temp directory, removed when the object dies.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("shiftscan_" + tag + "_" + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testhelpers
