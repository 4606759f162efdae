#pragma once

#include <vector>

#include "shiftscan/matrix.hpp"

namespace shiftscan {

/// m = u * diag(sigma) * v^T with u, v orthogonal and sigma descending.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

/// One-sided Jacobi SVD of a square matrix. Rank-deficient inputs get their
/// null directions completed to a full orthonormal basis, so u and v are
/// always orthogonal. Throws DataError if the sweep limit is hit.
SvdResult svd_square(const Matrix& m);

/// Orthogonal factor u * v^T of the polar decomposition, i.e. the solution
/// of the orthogonal Procrustes problem for cross-covariance `cross`.
Matrix procrustes_rotation(const Matrix& cross);

/// Determinant via LU with partial pivoting; used for validating transforms.
double determinant(Matrix m);

}  // namespace shiftscan
