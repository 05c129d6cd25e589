#include "obmbo/graph.hpp"

#include "obmbo/linalg.hpp"
#include "obmbo/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace obmbo {

PointCloud sample_cloud(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("cloud needs at least one point");
    PointCloud cloud;
    cloud.seed = seed;
    cloud.points.reserve(count);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        cloud.points.push_back({x, y});
    }
    return cloud;
}

PointCloud grid_cloud(GridGeometry geom) {
    PointCloud cloud;
    cloud.points.reserve(geom.cells());
    const double eps = geom.spacing();
    for (int iy = 0; iy < geom.n; ++iy) {
        for (int ix = 0; ix < geom.n; ++ix) {
            cloud.points.push_back({ix * eps, iy * eps});
        }
    }
    return cloud;
}

void save_cloud_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "x,y\n";
    char buf[64];
    for (const TorusPoint& p : cloud.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
        out << buf;
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

PointCloud load_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "x,y") {
        throw std::runtime_error("'" + path + "' is missing the x,y header");
    }
    PointCloud cloud;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string xs, ys;
        if (!std::getline(row, xs, ',') || !std::getline(row, ys)) {
            throw std::runtime_error("malformed cloud row: '" + line + "'");
        }
        try {
            cloud.points.push_back({std::stod(xs), std::stod(ys)});
        } catch (const std::exception&) {
            throw std::runtime_error("malformed cloud row: '" + line + "'");
        }
    }
    if (cloud.points.empty()) {
        throw std::runtime_error("'" + path + "' holds no points");
    }
    return cloud;
}

GraphLaplacian build_graph_laplacian(const PointCloud& cloud, double eps_g,
                                     GraphKernel kernel) {
    if (!(eps_g > 0.0) || eps_g > 0.5) {
        throw std::invalid_argument("graph scale eps_g must lie in (0, 0.5]");
    }
    const int n = cloud.size();
    if (n < 1) throw std::invalid_argument("empty cloud");

    GraphLaplacian lap;
    lap.n_nodes = n;
    lap.eps_g = eps_g;
    lap.kernel = kernel;
    lap.matrix.assign(static_cast<std::size_t>(n) * n, 0.0);

    const double e2 = eps_g * eps_g;
    const double coupling = 1.0 / (static_cast<double>(n) * e2 * e2);
    for (int i = 0; i < n; ++i) {
        double* row = lap.matrix.data() + static_cast<std::size_t>(i) * n;
        for (int j = i + 1; j < n; ++j) {
            if (torus_dist2(cloud.points[i], cloud.points[j]) <= e2) {
                row[j] = -coupling;
                lap.matrix[static_cast<std::size_t>(j) * n + i] = -coupling;
                row[i] += coupling;
                lap.matrix[static_cast<std::size_t>(j) * n + j] += coupling;
            }
        }
    }

    // BFS over the adjacency to flag disconnected samples; callers decide
    // whether that is a problem.
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const double* row = lap.matrix.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && j != i && row[j] != 0.0) {
                seen[j] = 1;
                ++visited;
                stack.push_back(j);
            }
        }
    }
    lap.connected = visited == n;
    return lap;
}

GraphHeat::GraphHeat(const GraphLaplacian& laplacian) : n_(laplacian.n_nodes) {
    if (n_ > 5000) {
        throw std::invalid_argument("graph semigroup limited to 5000 nodes");
    }
    eigvecs_rows_ = laplacian.matrix;
    symmetric_eigen_rows(n_, eigvecs_rows_, eigvals_);
}

std::vector<double> GraphHeat::apply(std::span<const double> u, double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("diffusion time h must be positive");
    if (static_cast<int>(u.size()) != n_) {
        throw std::invalid_argument("node vector size does not match graph");
    }
    std::vector<double> factors(eigvals_.size());
    for (std::size_t j = 0; j < eigvals_.size(); ++j) {
        factors[j] = std::exp(-h * eigvals_[j]);
    }
    return eigen_filter_apply(n_, eigvecs_rows_, factors, u);
}

namespace {

std::vector<double> widen(std::span<const std::int8_t> u) {
    return std::vector<double>(u.begin(), u.end());
}

} // namespace

std::vector<std::int8_t> graph_mbo_step(std::span<const std::int8_t> u,
                                        std::span<const std::uint8_t> phi,
                                        std::span<const std::uint8_t> psi,
                                        const GraphHeat& heat, double h) {
    const std::size_t n = u.size();
    if (phi.size() != n || psi.size() != n) {
        throw std::invalid_argument("node obstacle masks do not match state size");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (phi[i] && psi[i]) throw std::invalid_argument("obstacles overlap");
    }
    const std::vector<double> v = heat.apply(widen(u), h);
    std::vector<std::int8_t> out(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] > 0.0) out[i] = 1;
        if (phi[i]) out[i] = 1;
        if (psi[i]) out[i] = -1;
    }
    return out;
}

double graph_energy(std::span<const std::int8_t> u, const GraphHeat& heat, double h) {
    const std::vector<double> v = heat.apply(widen(u), h);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += (1.0 - u[i]) * (1.0 + v[i]);
    }
    return s / (std::sqrt(h) * static_cast<double>(u.size()));
}

double graph_movement(std::span<const std::int8_t> u, std::span<const std::int8_t> u_prev,
                      const GraphHeat& heat, double h) {
    if (u.size() != u_prev.size()) {
        throw std::invalid_argument("node states differ in size");
    }
    std::vector<double> diff(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        diff[i] = static_cast<double>(u[i]) - u_prev[i];
    }
    const std::vector<double> v = heat.apply(diff, h);
    double s = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        s += diff[i] * v[i];
    }
    return s / (std::sqrt(h) * static_cast<double>(u.size()));
}

double mean_field_gap(std::span<const std::int8_t> node_state, const PointCloud& cloud,
                      const PhaseField& reference) {
    if (static_cast<int>(node_state.size()) != cloud.size()) {
        throw std::invalid_argument("node state size does not match cloud");
    }
    const int n = reference.geom.n;
    std::size_t mismatches = 0;
    for (std::size_t k = 0; k < node_state.size(); ++k) {
        const TorusPoint& p = cloud.points[k];
        const int ix = static_cast<int>(std::llround(p.x * n)) % n;
        const int iy = static_cast<int>(std::llround(p.y * n)) % n;
        if (reference.values[reference.geom.index(ix, iy)] != node_state[k]) {
            ++mismatches;
        }
    }
    return static_cast<double>(mismatches) / static_cast<double>(node_state.size());
}

} // namespace obmbo
