#include "shiftscan/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shiftscan/error.hpp"

namespace shiftscan {

namespace {

double col_dot(const Matrix& m, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < m.rows(); ++k) s += m.at(k, i) * m.at(k, j);
  return s;
}

void rotate_cols(Matrix& m, std::size_t i, std::size_t j, double cs, double sn) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const double a = m.at(k, i);
    const double b = m.at(k, j);
    m.at(k, i) = cs * a - sn * b;
    m.at(k, j) = sn * a + cs * b;
  }
}

}  // namespace

SvdResult svd_square(const Matrix& m) {
  const std::size_t d = m.cols();
  Matrix work = m;
  Matrix v(d, d);
  for (std::size_t i = 0; i < d; ++i) v.at(i, i) = 1.0;

  constexpr int kMaxSweeps = 60;
  constexpr double kEps = 1e-14;
  bool converged = (d < 2);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const double a = col_dot(work, i, i);
        const double b = col_dot(work, j, j);
        const double c = col_dot(work, i, j);
        if (std::abs(c) <= kEps * std::sqrt(a * b) || a == 0.0 || b == 0.0) continue;
        converged = false;
        const double zeta = (b - a) / (2.0 * c);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        rotate_cols(work, i, j, cs, sn);
        rotate_cols(v, i, j, cs, sn);
      }
    }
  }
  if (!converged) throw DataError("SVD failed to converge");

  std::vector<double> sigma(d);
  for (std::size_t j = 0; j < d; ++j) sigma[j] = std::sqrt(std::max(0.0, col_dot(work, j, j)));

  // Sort singular values descending, permuting the columns of work and v.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdResult out;
  out.sigma.resize(d);
  out.u = Matrix(d, d);
  out.v = Matrix(d, d);
  const double sigma_max = sigma.empty() ? 0.0 : sigma[order.empty() ? 0 : order[0]];
  const double tol = std::max(sigma_max * 1e-13, 1e-300);

  std::size_t filled = 0;
  for (std::size_t idx = 0; idx < d; ++idx) {
    const std::size_t src = order[idx];
    out.sigma[idx] = sigma[src];
    for (std::size_t k = 0; k < d; ++k) out.v.at(k, idx) = v.at(k, src);
    if (sigma[src] > tol) {
      for (std::size_t k = 0; k < d; ++k) out.u.at(k, idx) = work.at(k, src) / sigma[src];
      filled = idx + 1;
    }
  }

  // Complete null-direction columns of u to an orthonormal basis.
  for (std::size_t idx = filled; idx < d; ++idx) {
    std::vector<double> cand(d, 0.0);
    double norm = 0.0;
    for (std::size_t seed = 0; seed < d && norm < 1e-6; ++seed) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[seed] = 1.0;
      for (std::size_t prev = 0; prev < idx; ++prev) {
        double proj = 0.0;
        for (std::size_t k = 0; k < d; ++k) proj += cand[k] * out.u.at(k, prev);
        for (std::size_t k = 0; k < d; ++k) cand[k] -= proj * out.u.at(k, prev);
      }
      norm = std::sqrt(std::inner_product(cand.begin(), cand.end(), cand.begin(), 0.0));
    }
    for (std::size_t k = 0; k < d; ++k) out.u.at(k, idx) = cand[k] / norm;
  }
  return out;
}

Matrix procrustes_rotation(const Matrix& cross) {
  const SvdResult svd = svd_square(cross);
  const std::size_t d = cross.cols();
  Matrix w(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += svd.u.at(i, k) * svd.v.at(j, k);
      w.at(i, j) = s;
    }
  }
  return w;
}

double determinant(Matrix m) {
  const std::size_t n = m.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m.at(r, col)) > std::abs(m.at(pivot, col))) pivot = r;
    }
    if (m.at(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
      det = -det;
    }
    det *= m.at(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m.at(r, col) / m.at(col, col);
      for (std::size_t c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
    }
  }
  return det;
}

}  // namespace shiftscan
