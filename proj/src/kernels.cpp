#include "shiftscan/kernels.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shiftscan::kernels {

namespace {

std::atomic<int> g_override{0};

int env_thread_cap() {
  const char* v = std::getenv("SHIFTSCAN_THREADS");
  if (v == nullptr) return 0;
  const int n = std::atoi(v);
  return n > 0 ? n : 0;
}

}  // namespace

int thread_count() {
  const int forced = g_override.load();
  if (forced > 0) return forced;
#ifdef _OPENMP
  int n = omp_get_max_threads();
  const int cap = env_thread_cap();
  if (cap > 0 && cap < n) n = cap;
  return n > 0 ? n : 1;
#else
  return 1;
#endif
}

void set_thread_override(int n) { g_override.store(n > 0 ? n : 0); }

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void row_dots(const Matrix& m, const double* query, double* out) {
  const std::size_t rows = m.rows();
  const std::size_t d = m.cols();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
  for (long long i = 0; i < static_cast<long long>(rows); ++i) {
    out[i] = dot(m.row(static_cast<std::size_t>(i)), query, d);
  }
}

Matrix crossprod(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  const std::size_t dc = b.cols();

  // a^T staged once so both inner loops stream contiguously (ikj order).
  Matrix at(d, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
  for (long long i = 0; i < static_cast<long long>(d); ++i) {
    double* dst = at.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < n; ++k) dst[k] = a.at(k, static_cast<std::size_t>(i));
  }

  Matrix c(d, dc);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
  for (long long i = 0; i < static_cast<long long>(d); ++i) {
    const double* arow = at.row(static_cast<std::size_t>(i));
    double* crow = c.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < n; ++k) {
      const double aki = arow[k];
      const double* brow = b.row(k);
      for (std::size_t j = 0; j < dc; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

void vec_mat(const double* x, const Matrix& w, double* out) {
  const std::size_t r = w.rows();
  const std::size_t c = w.cols();
  for (std::size_t j = 0; j < c; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double xi = x[i];
    const double* wrow = w.row(i);
    for (std::size_t j = 0; j < c; ++j) out[j] += xi * wrow[j];
  }
}

}  // namespace shiftscan::kernels
