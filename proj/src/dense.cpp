#include "obmbo/heat.hpp"
#include "obmbo/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace obmbo {

void symmetric_eigen_rows(int n, std::vector<double>& matrix, std::vector<double>& eigvals) {
    if (matrix.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("eigensolver input is not n x n");
    }
    eigvals.assign(n, 0.0);
    // Column-major on a row-major symmetric buffer is the transposed (equal)
    // matrix, and it leaves eigenvector j as row j of the buffer without the
    // extra transposed copy LAPACKE makes for row-major calls.
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                           matrix.data(), n, eigvals.data());
    if (info != 0) {
        throw std::runtime_error("dsyevd failed with info " + std::to_string(info));
    }
}

std::vector<double> eigen_filter_apply(int n, std::span<const double> eigvecs_rows,
                                       std::span<const double> factors,
                                       std::span<const double> u) {
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double* row = eigvecs_rows.data() + static_cast<std::size_t>(j) * n;
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += row[i] * u[i];
        const double coef = factors[j] * t;
        for (int i = 0; i < n; ++i) out[i] += coef * row[i];
    }
    return out;
}

DenseSemigroup::DenseSemigroup(GridGeometry geom) : geom_(geom) {
    const std::size_t cells = geom.cells();
    if (cells > 4096) {
        throw std::invalid_argument("dense semigroup limited to N <= 4096 cells");
    }
    eigvecs_rows_ = finite_difference_laplacian(geom);
    symmetric_eigen_rows(static_cast<int>(cells), eigvecs_rows_, eigvals_);
}

std::vector<double> DenseSemigroup::apply(std::span<const double> u, double h) const {
    if (!(h > 0.0)) {
        throw std::invalid_argument("diffusion time h must be positive");
    }
    if (u.size() != geom_.cells()) {
        throw std::invalid_argument("field size does not match grid");
    }
    const int n = static_cast<int>(geom_.cells());
    std::vector<double> factors(eigvals_.size());
    for (std::size_t j = 0; j < eigvals_.size(); ++j) {
        factors[j] = std::exp(-h * eigvals_[j]);
    }
    return eigen_filter_apply(n, eigvecs_rows_, factors, u);
}

RealField DenseSemigroup::apply(const RealField& u, double h) const {
    if (!(u.geom == geom_)) {
        throw std::invalid_argument("field and semigroup live on different grids");
    }
    RealField out(geom_);
    out.values = apply(std::span<const double>(u.values), h);
    return out;
}

RealField DenseSemigroup::apply(const PhaseField& u, double h) const {
    if (!(u.geom == geom_)) {
        throw std::invalid_argument("field and semigroup live on different grids");
    }
    std::vector<double> tmp(u.values.begin(), u.values.end());
    RealField out(geom_);
    out.values = apply(std::span<const double>(tmp), h);
    return out;
}

} // namespace obmbo
