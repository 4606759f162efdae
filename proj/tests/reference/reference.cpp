#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace reference {

std::size_t SimpleModel::find(const std::string& token) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == token) return i;
  }
  return npos;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

std::vector<std::string> top_neighbors(const SimpleModel& m, const std::string& word,
                                       std::size_t n) {
  const std::size_t q = m.find(word);
  if (q == SimpleModel::npos) throw std::runtime_error("reference: word not found");
  std::vector<std::pair<double, std::size_t>> sims;
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    if (i == q) continue;
    sims.emplace_back(cosine(m.rows[q], m.rows[i]), i);
  }
  std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(n, sims.size()); ++i) out.push_back(m.tokens[sims[i].second]);
  return out;
}

double jaccard(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
               std::size_t n) {
  const auto l1 = top_neighbors(m1, word, n);
  const auto l2 = top_neighbors(m2, word, n);
  const std::set<std::string> s1(l1.begin(), l1.end());
  const std::set<std::string> s2(l2.begin(), l2.end());
  std::set<std::string> uni = s1;
  uni.insert(s2.begin(), s2.end());
  std::size_t inter = 0;
  for (const auto& t : s1) inter += s2.count(t);
  return static_cast<double>(uni.size() - inter) / static_cast<double>(uni.size());
}

double kendall(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
               std::size_t n) {
  const auto l1 = top_neighbors(m1, word, n);
  const auto l2 = top_neighbors(m2, word, n);
  std::map<std::string, std::size_t> r1, r2;
  for (std::size_t i = 0; i < l1.size(); ++i) r1[l1[i]] = i;
  for (std::size_t i = 0; i < l2.size(); ++i) r2[l2[i]] = i;

  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (const auto& t : l1) {
    if (r2.count(t)) shared.emplace_back(r1[t], r2[t]);
  }
  if (shared.size() < 2) return 0.0;
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i + 1 < shared.size(); ++i) {
    for (std::size_t j = i + 1; j < shared.size(); ++j) {
      const bool a = shared[i].first < shared[j].first;
      const bool b = shared[i].second < shared[j].second;
      if (a == b) ++concordant;
      else ++discordant;
    }
  }
  const long long pairs = static_cast<long long>(shared.size()) *
                          static_cast<long long>(shared.size() - 1) / 2;
  return static_cast<double>(concordant - discordant) / static_cast<double>(pairs);
}

double global_anchors(const SimpleModel& m1, const SimpleModel& m2, const std::string& word) {
  const std::size_t q1 = m1.find(word);
  const std::size_t q2 = m2.find(word);
  if (q1 == SimpleModel::npos || q2 == SimpleModel::npos) {
    throw std::runtime_error("reference: word not found");
  }
  std::vector<double> s1, s2;
  for (std::size_t i = 0; i < m1.tokens.size(); ++i) {
    if (m1.tokens[i] == word) continue;
    const std::size_t j = m2.find(m1.tokens[i]);
    if (j == SimpleModel::npos) continue;
    s1.push_back(cosine(m1.rows[q1], m1.rows[i]));
    s2.push_back(cosine(m2.rows[q2], m2.rows[j]));
  }
  if (s1.empty()) throw std::runtime_error("reference: empty anchor set");
  return 1.0 - cosine(s1, s2);
}

double procrustes_score(const SimpleModel& m1, const SimpleModel& m2, const std::string& word,
                        const std::vector<std::vector<double>>& w) {
  const std::size_t q1 = m1.find(word);
  const std::size_t q2 = m2.find(word);
  if (q1 == SimpleModel::npos || q2 == SimpleModel::npos) {
    throw std::runtime_error("reference: word not found");
  }
  const std::vector<double>& v1 = m1.rows[q1];
  std::vector<double> mapped(w[0].size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w[i].size(); ++j) mapped[j] += v1[i] * w[i][j];
  }
  return 1.0 - cosine(mapped, m2.rows[q2]);
}

std::vector<double> row_dots(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& query) {
  std::vector<double> out(rows.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < query.size(); ++j) out[i] += rows[i][j] * query[j];
  }
  return out;
}

std::vector<std::vector<double>> crossprod(const std::vector<std::vector<double>>& a,
                                           const std::vector<std::vector<double>>& b) {
  const std::size_t d1 = a.empty() ? 0 : a[0].size();
  const std::size_t d2 = b.empty() ? 0 : b[0].size();
  std::vector<std::vector<double>> c(d1, std::vector<double>(d2, 0.0));
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t i = 0; i < d1; ++i) {
      for (std::size_t j = 0; j < d2; ++j) c[i][j] += a[k][i] * b[k][j];
    }
  }
  return c;
}

}  // namespace reference
