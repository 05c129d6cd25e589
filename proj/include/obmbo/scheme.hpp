#pragma once

#include "obmbo/grid.hpp"
#include "obmbo/heat.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace obmbo {

struct SchemeConfig {
    double h = 1e-4;
    int max_iters = 1000;
    /// When set, every iterate has exactly this many +1 cells instead of
    /// thresholding at zero.
    std::optional<std::int64_t> volume_target;
    bool record_energy = true;
};

enum class Termination { steady_state, max_iters };

const char* to_string(Termination t);

/// Per-iteration log of a run. Entry k-1 describes iterate u^k, so all
/// vectors have length iterations_run. Energy and movement stay empty when
/// record_energy is off.
struct RunRecord {
    int iterations_run = 0;
    Termination termination = Termination::max_iters;
    std::vector<double> area_fraction;
    std::vector<double> energy;
    std::vector<double> movement;
    std::vector<std::int64_t> flips;
    std::uint64_t seed = 0;
    SchemeConfig config;
};

/// One step of the obstacle scheme: diffuse, threshold at zero (ties to -1),
/// then clamp to the obstacles.
PhaseField mbo_step(const PhaseField& u, const ObstacleSet& obs,
                    const KernelSpectrum& spectrum);

/// Same update written as one sign evaluation of
/// diffused + indicator(Phi) - indicator(Psi). Agrees with mbo_step
/// whenever the diffused field is not exactly -1 on Phi or +1 on Psi.
PhaseField mbo_step_signsum(const PhaseField& u, const ObstacleSet& obs,
                            const KernelSpectrum& spectrum);

/// Overwrites the diffused field with +1 on Phi and -1 on Psi.
RealField clamp_real_to_obstacles(const RealField& v, const ObstacleSet& obs);

/// Picks the +1 set of size exactly `volume`: all of Phi first, then free
/// cells by descending value, ties by ascending linear index. Psi cells are
/// never picked. Requires |Phi| <= volume <= N - |Psi|.
PhaseField volume_threshold(const RealField& v, const ObstacleSet& obs,
                            std::int64_t volume);

/// One step of the volume-constrained variant: diffuse, clamp the real
/// field on the obstacles, then fill to the target volume.
PhaseField mbo_step_volume(const PhaseField& u, const ObstacleSet& obs,
                           const KernelSpectrum& spectrum, std::int64_t volume);

using SnapshotFn = std::function<void(int iteration, const PhaseField& state)>;

/// Iterates from u0 until a fixed point or cfg.max_iters. Snapshots fire for
/// iteration 0 and every positive multiple of snapshot_stride (stride 0
/// disables them). Energy bookkeeping reuses the diffusion of each iterate,
/// adding at most one extra transform per run.
std::pair<PhaseField, RunRecord> run(const PhaseField& u0, const ObstacleSet& obs,
                                     const SchemeConfig& cfg, int snapshot_stride = 0,
                                     const SnapshotFn& on_snapshot = nullptr);

} // namespace obmbo
