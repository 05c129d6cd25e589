#pragma once

#include "obmbo/grid.hpp"

#include <vector>

namespace obmbo {

/// Fourier multipliers of the heat semigroup e^{-h L} for the periodic
/// finite-difference Laplacian L on an n x n grid.
///
/// Entry (ky, kx) stored at ky*n + kx equals
///   exp(2 N h (cos(2 pi ky / n) + cos(2 pi kx / n) - 2)),   N = n^2.
/// All entries lie in [0, 1], entry (0,0) is exactly 1 (mass conservation),
/// and the table is even in each index: M[k] = M[n-k]. Entries below 1e-250
/// are flushed to exact zero: they cannot move any output past the 1e-240
/// scale, while denormal-range values make the transforms crawl.
struct KernelSpectrum {
    GridGeometry geom;
    double h = 0.0;
    std::vector<double> multipliers; // full n x n table
    std::vector<double> half;        // packed n x (n/2+1) slice for the r2c layout
};

KernelSpectrum build_spectrum(double h, GridGeometry geom);

/// Applies e^{-h L} via real-to-complex FFT, multiplier product, inverse
/// transform. O(N log N), deterministic bytes for a fixed build.
RealField apply_semigroup(const PhaseField& u, const KernelSpectrum& spectrum);
RealField apply_semigroup(const RealField& u, const KernelSpectrum& spectrum);

/// Same transform writing into an existing field, so iteration loops can
/// rotate buffers instead of allocating tens of megabytes per step. `out`
/// is resized as needed; aliasing `u` and `out` is fine.
void apply_semigroup_into(const PhaseField& u, const KernelSpectrum& spectrum,
                          RealField& out);
void apply_semigroup_into(const RealField& u, const KernelSpectrum& spectrum,
                          RealField& out);

/// Dense N x N finite-difference Laplacian, row-major. Row i holds 4/eps^2
/// on the diagonal and -1/eps^2 per neighbour arm (arms can coincide for
/// n = 2). Intended for oracles and the graph comparison; O(N^2) memory.
std::vector<double> finite_difference_laplacian(GridGeometry geom);

/// Reference semigroup through a dense symmetric eigendecomposition of the
/// finite-difference Laplacian. Shares no code with the spectral path.
/// Construction is O(N^3); keep N = n^2 at or below 4096.
class DenseSemigroup {
public:
    explicit DenseSemigroup(GridGeometry geom);

    RealField apply(const PhaseField& u, double h) const;
    RealField apply(const RealField& u, double h) const;
    std::vector<double> apply(std::span<const double> u, double h) const;

    const GridGeometry& geometry() const { return geom_; }

private:
    GridGeometry geom_;
    std::vector<double> eigvecs_rows_; // row j = eigenvector j
    std::vector<double> eigvals_;
};

/// One-shot convenience wrapper around DenseSemigroup.
RealField apply_semigroup_direct(const PhaseField& u, double h, GridGeometry geom);

} // namespace obmbo
