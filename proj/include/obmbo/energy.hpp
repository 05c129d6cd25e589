#pragma once

#include "obmbo/grid.hpp"
#include "obmbo/heat.hpp"

#include <span>

namespace obmbo {

/// Thresholding energy
///   E(u) = 1/(sqrt(h) N) * sum_x (1 - u(x)) * (e^{-hL}(1 + u))(x),
/// evaluated as (1 - u) . (1 + Gu) since the semigroup fixes constants.
double energy(const PhaseField& u, const KernelSpectrum& spectrum);

/// Movement term d^2(u, u_prev) / (2h) of the minimizing-movement objective:
///   1/(sqrt(h) N) * sum_x (u - u_prev)(x) * (e^{-hL}(u - u_prev))(x).
double movement(const PhaseField& u, const PhaseField& u_prev,
                const KernelSpectrum& spectrum);

/// Obstacle penalty
///   4/(sqrt(h) N) * sum_x [ (phi(x) - u(x))_+ + (psi(x) - u(x))_- ],
/// with phi = +1 on Phi / -1 off, psi = -1 on Psi / +1 off and
/// x_- = max(-x, 0). Each violated cell contributes 8/(sqrt(h) N).
double obstacle_penalty(const PhaseField& u, const ObstacleSet& obs, double h);

/// Same quantities with a precomputed diffusion, so run loops can reuse the
/// transform they already did for the step itself.
double energy_from_diffusion(const PhaseField& u, const RealField& diffused, double h);
double movement_from_diffusions(const PhaseField& u, const PhaseField& u_prev,
                                const RealField& diffused_u,
                                const RealField& diffused_u_prev, double h);

/// Dense-path variants for oracle use; no FFT involved.
double energy(const PhaseField& u, const DenseSemigroup& dense, double h);
double movement(const PhaseField& u, const PhaseField& u_prev,
                const DenseSemigroup& dense, double h);

struct EnergyReport {
    double energy = 0.0;
    double movement = 0.0;
    double penalty = 0.0;
    double objective = 0.0; // sum of the three
};

EnergyReport mm_objective(const PhaseField& u, const PhaseField& u_prev,
                          const ObstacleSet& obs, const KernelSpectrum& spectrum);
EnergyReport mm_objective(const PhaseField& u, const PhaseField& u_prev,
                          const ObstacleSet& obs, const DenseSemigroup& dense, double h);

enum class MinimizerCheck {
    /// Brute force over all 2^N phase fields through the dense semigroup.
    /// Requires N <= 16.
    enumeration,
    /// Per-cell optimality of the separable objective; any grid size.
    certificate,
};

/// True iff u_next minimizes energy + movement + penalty over phase fields,
/// given predecessor u_prev. Objective ties within 1e-12 count as optimal.
bool verify_minimizer(const PhaseField& u_next, const PhaseField& u_prev,
                      const ObstacleSet& obs, const KernelSpectrum& spectrum,
                      MinimizerCheck mode);

} // namespace obmbo
