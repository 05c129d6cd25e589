#pragma once

#include <span>
#include <vector>

namespace obmbo {

/// Full symmetric eigendecomposition. On entry `matrix` holds a row-major
/// symmetric n x n matrix; on exit row j is the j-th orthonormal eigenvector
/// and eigenvalues come back ascending. Throws std::runtime_error if the
/// solver does not converge.
void symmetric_eigen_rows(int n, std::vector<double>& matrix, std::vector<double>& eigvals);

/// y = sum_j f(lambda_j) <v_j, u> v_j, with eigenvectors as rows as produced
/// by symmetric_eigen_rows and per-eigenvalue factors precomputed.
std::vector<double> eigen_filter_apply(int n, std::span<const double> eigvecs_rows,
                                       std::span<const double> factors,
                                       std::span<const double> u);

} // namespace obmbo
