#pragma once

#include <cstddef>

#include "shiftscan/matrix.hpp"

namespace shiftscan::kernels {

/// Worker count used by the parallel kernels: min(OpenMP max threads,
/// SHIFTSCAN_THREADS if set). Always 1 in builds without OpenMP.
int thread_count();

/// Override the worker count for this process (0 = back to default).
void set_thread_override(int n);

double dot(const double* a, const double* b, std::size_t n);

/// out[i] = dot(m.row(i), query); parallel over rows, each row a serial dot,
/// so results do not depend on the thread count.
void row_dots(const Matrix& m, const double* query, double* out);

/// C = A^T * B for A, B with identical shape n x d; C is d x d. Parallel over
/// output entries, each entry a serial sum over n.
Matrix crossprod(const Matrix& a, const Matrix& b);

/// out = x * W for a row vector x of length W.rows().
void vec_mat(const double* x, const Matrix& w, double* out);

}  // namespace shiftscan::kernels
