#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace obmbo {

/// Square periodic grid on the unit torus [0,1)^2.
///
/// Cells sit at the corner-anchored points (i*eps, j*eps) with eps = 1/n,
/// so there are N = n^2 of them. Linear index is row-major: iy * n + ix.
struct GridGeometry {
    int n = 0;

    GridGeometry() = default;
    explicit GridGeometry(int side);

    double spacing() const { return 1.0 / n; }
    std::size_t cells() const { return static_cast<std::size_t>(n) * n; }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n + ix; }
    int wrap(int i) const {
        i %= n;
        return i < 0 ? i + n : i;
    }

    bool operator==(const GridGeometry&) const = default;
};

/// A point on the unit torus.
struct TorusPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Squared torus distance (shortest wraparound representative per axis).
double torus_dist2(const TorusPoint& a, const TorusPoint& b);

/// Two-valued phase state, one of {-1, +1} per cell.
struct PhaseField {
    GridGeometry geom;
    std::vector<std::int8_t> values;

    PhaseField() = default;
    PhaseField(GridGeometry g, std::int8_t fill);
    PhaseField(GridGeometry g, std::vector<std::int8_t> v);

    bool operator==(const PhaseField&) const = default;
};

/// Real-valued field, typically a diffused phase field.
struct RealField {
    GridGeometry geom;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(GridGeometry g, double fill = 0.0);
};

/// Inner obstacle Phi (forced +1) and outer obstacle Psi (forced -1).
/// The two masks must be disjoint.
struct ObstacleSet {
    GridGeometry geom;
    std::vector<std::uint8_t> phi;
    std::vector<std::uint8_t> psi;

    ObstacleSet() = default;
    explicit ObstacleSet(GridGeometry g); // both masks empty
    ObstacleSet(GridGeometry g, std::vector<std::uint8_t> phi_mask,
                std::vector<std::uint8_t> psi_mask);

    bool any() const;
    std::size_t phi_count() const;
    std::size_t psi_count() const;
};

/// Marks every cell whose grid point lies within torus distance `radius`
/// (inclusive) of at least one center. Radius must be in (0, 0.5).
std::vector<std::uint8_t> rasterize_disks(std::span<const TorusPoint> centers,
                                          double radius, GridGeometry geom);

/// Mask of a vertical band x0 <= x < x1 in torus coordinates (x1 may wrap
/// past 1). Used for straight-interface setups.
std::vector<std::uint8_t> band_mask(GridGeometry geom, double x0, double x1);

/// Mask of the padding frame: every cell within `width_cells` of the torus
/// seam in either axis, i.e. ix < w or ix >= n-w or same in y.
std::vector<std::uint8_t> frame_mask(GridGeometry geom, int width_cells);

/// Forces +1 on Phi and -1 on Psi, leaves the rest alone.
PhaseField clamp_to_obstacles(const PhaseField& u, const ObstacleSet& obs);

/// Pointwise sign with ties at zero going to -1: +1 iff v > 0.
PhaseField threshold(const RealField& v);

/// True iff a <= b everywhere. Grids must match.
bool field_leq(const PhaseField& a, const PhaseField& b);

/// +1 where the mask is set, -1 elsewhere.
PhaseField phase_from_mask(GridGeometry geom, std::span<const std::uint8_t> mask);

double area_fraction(const PhaseField& u);
std::size_t count_mask(std::span<const std::uint8_t> mask);
std::int64_t count_plus(const PhaseField& u);

} // namespace obmbo
