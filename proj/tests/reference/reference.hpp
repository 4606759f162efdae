#pragma once

// Serial brute-force reference implementations, coded independently of the
// library (plain vectors, naive loops, full sorts). They serve two jobs:
// oracle values for the unit and acceptance tests, and the single-threaded
// baseline for the kernel benchmark. Keep this file free of shiftscan
// internals beyond std types.

#include <cstddef>
#include <string>
#include <vector>

namespace reference {

struct SimpleModel {
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> rows;

  std::size_t find(const std::string& token) const;  // npos when absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Tokens of the top-n cosine neighbors, query excluded, full sort,
/// ties by ascending token position.
std::vector<std::string> top_neighbors(const SimpleModel& m, const std::string& word,
                                       std::size_t n);

double jaccard(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
               std::size_t n);

double kendall(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
               std::size_t n);

/// Second-order distance over the shared-token anchor set (minus the word).
double global_anchors(const SimpleModel& m1, const SimpleModel& m2, const std::string& word);

/// 1 - cos(v1 * w, v2) with the matrix product spelled out.
double procrustes_score(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
                        const std::vector<std::vector<double>>& w);

// serial baselines for the benchmark
std::vector<double> row_dots(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& query);
std::vector<std::vector<double>> crossprod(const std::vector<std::vector<double>>& a,
                                           const std::vector<std::vector<double>>& b);

}  // namespace reference
