#pragma once

#include "obmbo/grid.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace obmbo {

/// Unordered sample of torus points, kept with the seed that produced it.
struct PointCloud {
    std::vector<TorusPoint> points;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(points.size()); }
};

/// `count` i.i.d. uniform points on [0,1)^2, coordinates drawn x then y per
/// point. Same seed, same cloud, bit for bit.
PointCloud sample_cloud(int count, std::uint64_t seed);

/// The n x n grid points as a cloud, linear index order.
PointCloud grid_cloud(GridGeometry geom);

void save_cloud_csv(const PointCloud& cloud, const std::string& path);
PointCloud load_cloud_csv(const std::string& path);

/// Ball-indicator weight kernel is the only one shipped; the tag keeps the
/// construction explicit at call sites.
enum class GraphKernel { ball_indicator };

/// Dense graph Laplacian
///   (L u)(x) = 1/N * sum_y w(x,y) (u(x) - u(y)) / eps_g^2,
///   w(x,y) = eta(d(x,y)/eps_g) / eps_g^2,  eta = indicator of [0,1],
/// so every pair within torus distance eps_g (inclusive) couples with
/// magnitude 1/(N eps_g^4). Symmetric positive semidefinite by construction.
struct GraphLaplacian {
    int n_nodes = 0;
    double eps_g = 0.0;
    GraphKernel kernel = GraphKernel::ball_indicator;
    std::vector<double> matrix; // row-major n_nodes x n_nodes
    bool connected = false;
};

GraphLaplacian build_graph_laplacian(const PointCloud& cloud, double eps_g,
                                     GraphKernel kernel = GraphKernel::ball_indicator);

/// Graph heat semigroup e^{-h L} through a full symmetric
/// eigendecomposition; nodes capped at 5000.
class GraphHeat {
public:
    explicit GraphHeat(const GraphLaplacian& laplacian);

    std::vector<double> apply(std::span<const double> u, double h) const;
    int nodes() const { return n_; }

private:
    int n_ = 0;
    std::vector<double> eigvecs_rows_;
    std::vector<double> eigvals_;
};

/// Diffuse, threshold at zero (ties to -1), clamp to the node obstacles.
std::vector<std::int8_t> graph_mbo_step(std::span<const std::int8_t> u,
                                        std::span<const std::uint8_t> phi,
                                        std::span<const std::uint8_t> psi,
                                        const GraphHeat& heat, double h);

/// Node analogues of the grid energy and movement, normalized by the node
/// count.
double graph_energy(std::span<const std::int8_t> u, const GraphHeat& heat, double h);
double graph_movement(std::span<const std::int8_t> u, std::span<const std::int8_t> u_prev,
                      const GraphHeat& heat, double h);

/// Fraction of nodes whose state disagrees with the reference grid field at
/// the nearest grid point (wraparound rounding).
double mean_field_gap(std::span<const std::int8_t> node_state, const PointCloud& cloud,
                      const PhaseField& reference);

} // namespace obmbo
