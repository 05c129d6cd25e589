#include "obmbo/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace obmbo {

namespace {

double scale_factor(const GridGeometry& geom, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("diffusion time h must be positive");
    return 1.0 / (std::sqrt(h) * static_cast<double>(geom.cells()));
}

} // namespace

double energy_from_diffusion(const PhaseField& u, const RealField& diffused, double h) {
    if (!(u.geom == diffused.geom)) {
        throw std::invalid_argument("field and diffusion live on different grids");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        s += (1.0 - u.values[i]) * (1.0 + diffused.values[i]);
    }
    return scale_factor(u.geom, h) * s;
}

double movement_from_diffusions(const PhaseField& u, const PhaseField& u_prev,
                                const RealField& diffused_u,
                                const RealField& diffused_u_prev, double h) {
    if (!(u.geom == u_prev.geom)) {
        throw std::invalid_argument("fields live on different grids");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double d = static_cast<double>(u.values[i]) - u_prev.values[i];
        s += d * (diffused_u.values[i] - diffused_u_prev.values[i]);
    }
    return scale_factor(u.geom, h) * s;
}

double energy(const PhaseField& u, const KernelSpectrum& spectrum) {
    return energy_from_diffusion(u, apply_semigroup(u, spectrum), spectrum.h);
}

double movement(const PhaseField& u, const PhaseField& u_prev,
                const KernelSpectrum& spectrum) {
    return movement_from_diffusions(u, u_prev, apply_semigroup(u, spectrum),
                                    apply_semigroup(u_prev, spectrum), spectrum.h);
}

double energy(const PhaseField& u, const DenseSemigroup& dense, double h) {
    return energy_from_diffusion(u, dense.apply(u, h), h);
}

double movement(const PhaseField& u, const PhaseField& u_prev,
                const DenseSemigroup& dense, double h) {
    return movement_from_diffusions(u, u_prev, dense.apply(u, h), dense.apply(u_prev, h),
                                    h);
}

double obstacle_penalty(const PhaseField& u, const ObstacleSet& obs, double h) {
    if (!(u.geom == obs.geom)) {
        throw std::invalid_argument("field and obstacles live on different grids");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double ui = u.values[i];
        const double phi = obs.phi[i] ? 1.0 : -1.0;
        const double psi = obs.psi[i] ? -1.0 : 1.0;
        s += std::max(phi - ui, 0.0) + std::max(-(psi - ui), 0.0);
    }
    return 4.0 * scale_factor(u.geom, h) * s;
}

EnergyReport mm_objective(const PhaseField& u, const PhaseField& u_prev,
                          const ObstacleSet& obs, const KernelSpectrum& spectrum) {
    EnergyReport r;
    r.energy = energy(u, spectrum);
    r.movement = movement(u, u_prev, spectrum);
    r.penalty = obstacle_penalty(u, obs, spectrum.h);
    r.objective = r.energy + r.movement + r.penalty;
    return r;
}

EnergyReport mm_objective(const PhaseField& u, const PhaseField& u_prev,
                          const ObstacleSet& obs, const DenseSemigroup& dense, double h) {
    EnergyReport r;
    r.energy = energy(u, dense, h);
    r.movement = movement(u, u_prev, dense, h);
    r.penalty = obstacle_penalty(u, obs, h);
    r.objective = r.energy + r.movement + r.penalty;
    return r;
}

namespace {

bool verify_by_enumeration(const PhaseField& u_next, const PhaseField& u_prev,
                           const ObstacleSet& obs, double h) {
    const GridGeometry geom = u_next.geom;
    const std::size_t cells = geom.cells();
    if (cells > 16) {
        throw std::invalid_argument("grid too large for full enumeration (N <= 16)");
    }
    const DenseSemigroup dense(geom);
    const RealField gu_prev = dense.apply(u_prev, h);

    // objective(w) = E(w) + movement(w, u_prev) + penalty(w), all through the
    // dense route so this check shares nothing with the spectral step.
    const auto objective_of = [&](const PhaseField& w) {
        const RealField gw = dense.apply(w, h);
        return energy_from_diffusion(w, gw, h) +
               movement_from_diffusions(w, u_prev, gw, gu_prev, h) +
               obstacle_penalty(w, obs, h);
    };

    double best = objective_of(u_next);
    const double candidate_obj = best;
    PhaseField w(geom, static_cast<std::int8_t>(-1));
    const std::uint32_t total = 1u << cells;
    for (std::uint32_t bits = 0; bits < total; ++bits) {
        for (std::size_t i = 0; i < cells; ++i) {
            w.values[i] = (bits >> i) & 1u ? 1 : -1;
        }
        const double obj = objective_of(w);
        if (obj < best) best = obj;
    }
    return candidate_obj <= best + 1e-12;
}

bool verify_by_certificate(const PhaseField& u_next, const PhaseField& u_prev,
                           const ObstacleSet& obs, const KernelSpectrum& spectrum) {
    // The objective is separable across cells once the bilinear form is
    // expanded around u_prev: cell x prefers the sign of (Gu_prev)(x), an
    // exact tie is indifferent, and a clamped cell always prefers its
    // obstacle sign because |Gu_prev| <= 1 keeps the linear gain below the
    // 8/(sqrt(h) N) violation cost.
    const RealField v = apply_semigroup(u_prev, spectrum);
    for (std::size_t i = 0; i < u_next.values.size(); ++i) {
        if (obs.phi[i]) {
            if (u_next.values[i] != 1) return false;
        } else if (obs.psi[i]) {
            if (u_next.values[i] != -1) return false;
        } else if (v.values[i] != 0.0 &&
                   u_next.values[i] != (v.values[i] > 0.0 ? 1 : -1)) {
            return false;
        }
    }
    return true;
}

} // namespace

bool verify_minimizer(const PhaseField& u_next, const PhaseField& u_prev,
                      const ObstacleSet& obs, const KernelSpectrum& spectrum,
                      MinimizerCheck mode) {
    if (!(u_next.geom == u_prev.geom) || !(u_next.geom == obs.geom)) {
        throw std::invalid_argument("fields and obstacles live on different grids");
    }
    switch (mode) {
    case MinimizerCheck::enumeration:
        return verify_by_enumeration(u_next, u_prev, obs, spectrum.h);
    case MinimizerCheck::certificate:
        return verify_by_certificate(u_next, u_prev, obs, spectrum);
    }
    throw std::invalid_argument("unknown minimizer check mode");
}

} // namespace obmbo
