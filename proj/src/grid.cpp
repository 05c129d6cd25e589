#include "obmbo/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace obmbo {

GridGeometry::GridGeometry(int side) : n(side) {
    if (side < 2) {
        throw std::invalid_argument("grid side must be at least 2, got " +
                                    std::to_string(side));
    }
}

double torus_dist2(const TorusPoint& a, const TorusPoint& b) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (dx > 0.5) dx = 1.0 - dx;
    if (dy > 0.5) dy = 1.0 - dy;
    return dx * dx + dy * dy;
}

PhaseField::PhaseField(GridGeometry g, std::int8_t fill) : geom(g), values(g.cells(), fill) {
    if (fill != 1 && fill != -1) {
        throw std::invalid_argument("phase fill must be +1 or -1");
    }
}

PhaseField::PhaseField(GridGeometry g, std::vector<std::int8_t> v)
    : geom(g), values(std::move(v)) {
    if (values.size() != geom.cells()) {
        throw std::invalid_argument("phase field size does not match grid");
    }
    for (std::int8_t s : values) {
        if (s != 1 && s != -1) {
            throw std::invalid_argument("phase field entries must be +1 or -1");
        }
    }
}

RealField::RealField(GridGeometry g, double fill) : geom(g), values(g.cells(), fill) {}

ObstacleSet::ObstacleSet(GridGeometry g)
    : geom(g), phi(g.cells(), 0), psi(g.cells(), 0) {}

ObstacleSet::ObstacleSet(GridGeometry g, std::vector<std::uint8_t> phi_mask,
                         std::vector<std::uint8_t> psi_mask)
    : geom(g), phi(std::move(phi_mask)), psi(std::move(psi_mask)) {
    if (phi.size() != geom.cells() || psi.size() != geom.cells()) {
        throw std::invalid_argument("obstacle mask size does not match grid");
    }
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] && psi[i]) {
            throw std::invalid_argument("obstacles overlap");
        }
    }
}

bool ObstacleSet::any() const {
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] || psi[i]) return true;
    }
    return false;
}

std::size_t ObstacleSet::phi_count() const { return count_mask(phi); }
std::size_t ObstacleSet::psi_count() const { return count_mask(psi); }

std::vector<std::uint8_t> rasterize_disks(std::span<const TorusPoint> centers,
                                          double radius, GridGeometry geom) {
    if (!(radius > 0.0) || radius >= 0.5) {
        throw std::invalid_argument("disk radius must lie in (0, 0.5)");
    }
    std::vector<std::uint8_t> mask(geom.cells(), 0);
    const double eps = geom.spacing();
    const double r2 = radius * radius;
    const int reach = static_cast<int>(std::ceil(radius / eps));
    for (const TorusPoint& c : centers) {
        if (!(c.x >= 0.0) || c.x >= 1.0 || !(c.y >= 0.0) || c.y >= 1.0) {
            throw std::invalid_argument("disk center must lie in [0,1)^2");
        }
        // Only cells in the bounding square around the center can be hit.
        const int cx = static_cast<int>(std::floor(c.x / eps));
        const int cy = static_cast<int>(std::floor(c.y / eps));
        for (int dy = -reach - 1; dy <= reach + 1; ++dy) {
            const int iy = geom.wrap(cy + dy);
            for (int dx = -reach - 1; dx <= reach + 1; ++dx) {
                const int ix = geom.wrap(cx + dx);
                const TorusPoint p{ix * eps, iy * eps};
                if (torus_dist2(p, c) <= r2) {
                    mask[geom.index(ix, iy)] = 1;
                }
            }
        }
    }
    return mask;
}

std::vector<std::uint8_t> band_mask(GridGeometry geom, double x0, double x1) {
    if (!(x0 >= 0.0) || x0 >= 1.0 || !(x1 > x0) || x1 - x0 >= 1.0) {
        throw std::invalid_argument("band requires 0 <= x0 < x1 < x0 + 1");
    }
    std::vector<std::uint8_t> mask(geom.cells(), 0);
    const double eps = geom.spacing();
    for (int ix = 0; ix < geom.n; ++ix) {
        const double x = ix * eps;
        const bool in = (x >= x0 && x < x1) || (x + 1.0 >= x0 && x + 1.0 < x1);
        if (!in) continue;
        for (int iy = 0; iy < geom.n; ++iy) {
            mask[geom.index(ix, iy)] = 1;
        }
    }
    return mask;
}

std::vector<std::uint8_t> frame_mask(GridGeometry geom, int width_cells) {
    if (width_cells < 0 || 2 * width_cells > geom.n) {
        throw std::invalid_argument("frame width must satisfy 0 <= w <= n/2");
    }
    std::vector<std::uint8_t> mask(geom.cells(), 0);
    const int w = width_cells;
    for (int iy = 0; iy < geom.n; ++iy) {
        const bool edge_y = iy < w || iy >= geom.n - w;
        for (int ix = 0; ix < geom.n; ++ix) {
            if (edge_y || ix < w || ix >= geom.n - w) {
                mask[geom.index(ix, iy)] = 1;
            }
        }
    }
    return mask;
}

PhaseField clamp_to_obstacles(const PhaseField& u, const ObstacleSet& obs) {
    if (u.geom != obs.geom) {
        throw std::invalid_argument("phase field and obstacles live on different grids");
    }
    PhaseField out = u;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (obs.phi[i]) {
            out.values[i] = 1;
        } else if (obs.psi[i]) {
            out.values[i] = -1;
        }
    }
    return out;
}

PhaseField threshold(const RealField& v) {
    PhaseField out(v.geom, static_cast<std::int8_t>(-1));
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        // ties at exactly zero stay -1
        if (v.values[i] > 0.0) out.values[i] = 1;
    }
    return out;
}

bool field_leq(const PhaseField& a, const PhaseField& b) {
    if (a.geom != b.geom) {
        throw std::invalid_argument("cannot compare fields on different grids");
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] > b.values[i]) return false;
    }
    return true;
}

PhaseField phase_from_mask(GridGeometry geom, std::span<const std::uint8_t> mask) {
    if (mask.size() != geom.cells()) {
        throw std::invalid_argument("mask size does not match grid");
    }
    PhaseField out(geom, static_cast<std::int8_t>(-1));
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) out.values[i] = 1;
    }
    return out;
}

double area_fraction(const PhaseField& u) {
    return static_cast<double>(count_plus(u)) / static_cast<double>(u.geom.cells());
}

std::size_t count_mask(std::span<const std::uint8_t> mask) {
    std::size_t c = 0;
    for (std::uint8_t m : mask) {
        if (m) ++c;
    }
    return c;
}

std::int64_t count_plus(const PhaseField& u) {
    std::int64_t c = 0;
    for (std::int8_t s : u.values) {
        if (s > 0) ++c;
    }
    return c;
}

} // namespace obmbo
