#include "obmbo/scheme.hpp"

#include "obmbo/energy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace obmbo {

const char* to_string(Termination t) {
    return t == Termination::steady_state ? "steady_state" : "max_iters";
}

PhaseField mbo_step(const PhaseField& u, const ObstacleSet& obs,
                    const KernelSpectrum& spectrum) {
    return clamp_to_obstacles(threshold(apply_semigroup(u, spectrum)), obs);
}

PhaseField mbo_step_signsum(const PhaseField& u, const ObstacleSet& obs,
                            const KernelSpectrum& spectrum) {
    if (!(u.geom == obs.geom)) {
        throw std::invalid_argument("phase field and obstacles live on different grids");
    }
    const RealField v = apply_semigroup(u, spectrum);
    PhaseField out(u.geom, static_cast<std::int8_t>(-1));
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double s = v.values[i] + (obs.phi[i] ? 1.0 : 0.0) - (obs.psi[i] ? 1.0 : 0.0);
        if (s > 0.0) out.values[i] = 1;
    }
    return out;
}

RealField clamp_real_to_obstacles(const RealField& v, const ObstacleSet& obs) {
    if (!(v.geom == obs.geom)) {
        throw std::invalid_argument("field and obstacles live on different grids");
    }
    RealField out = v;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (obs.phi[i]) {
            out.values[i] = 1.0;
        } else if (obs.psi[i]) {
            out.values[i] = -1.0;
        }
    }
    return out;
}

PhaseField volume_threshold(const RealField& v, const ObstacleSet& obs,
                            std::int64_t volume) {
    if (!(v.geom == obs.geom)) {
        throw std::invalid_argument("field and obstacles live on different grids");
    }
    const std::int64_t cells = static_cast<std::int64_t>(v.geom.cells());
    const std::int64_t n_phi = static_cast<std::int64_t>(obs.phi_count());
    const std::int64_t n_psi = static_cast<std::int64_t>(obs.psi_count());
    if (volume < n_phi || volume > cells - n_psi) {
        throw std::invalid_argument("volume target infeasible: need |Phi| <= V <= N - |Psi|");
    }

    PhaseField out(v.geom, static_cast<std::int8_t>(-1));
    std::vector<std::size_t> free_cells;
    free_cells.reserve(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (obs.phi[i]) {
            out.values[i] = 1; // the clamped plateau is always inside the +1 set
        } else if (!obs.psi[i]) {
            free_cells.push_back(i);
        }
    }

    std::int64_t slots = volume - n_phi;
    if (slots > 0) {
        // Highest diffused value first; equal values resolve by ascending
        // linear index so the cut is reproducible.
        std::stable_sort(free_cells.begin(), free_cells.end(),
                         [&v](std::size_t a, std::size_t b) {
                             if (v.values[a] != v.values[b]) {
                                 return v.values[a] > v.values[b];
                             }
                             return a < b;
                         });
        for (std::int64_t k = 0; k < slots; ++k) {
            out.values[free_cells[static_cast<std::size_t>(k)]] = 1;
        }
    }
    return out;
}

PhaseField mbo_step_volume(const PhaseField& u, const ObstacleSet& obs,
                           const KernelSpectrum& spectrum, std::int64_t volume) {
    const RealField v = clamp_real_to_obstacles(apply_semigroup(u, spectrum), obs);
    return volume_threshold(v, obs, volume);
}

namespace {

std::int64_t count_flips(const PhaseField& a, const PhaseField& b) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] != b.values[i]) ++c;
    }
    return c;
}

} // namespace

std::pair<PhaseField, RunRecord> run(const PhaseField& u0, const ObstacleSet& obs,
                                     const SchemeConfig& cfg, int snapshot_stride,
                                     const SnapshotFn& on_snapshot) {
    if (cfg.max_iters < 1) {
        throw std::invalid_argument("max_iters must be at least 1");
    }
    if (snapshot_stride < 0) {
        throw std::invalid_argument("snapshot stride must be nonnegative");
    }
    const KernelSpectrum spectrum = build_spectrum(cfg.h, u0.geom);
    if (cfg.volume_target) {
        // fail before iterating, not on the first step
        const std::int64_t v = *cfg.volume_target;
        const std::int64_t cells = static_cast<std::int64_t>(u0.geom.cells());
        if (v < static_cast<std::int64_t>(obs.phi_count()) ||
            v > cells - static_cast<std::int64_t>(obs.psi_count())) {
            throw std::invalid_argument(
                "volume target infeasible: need |Phi| <= V <= N - |Psi|");
        }
    }

    RunRecord rec;
    rec.config = cfg;

    PhaseField u_cur = u0;
    PhaseField u_prev;       // u^{l-1} once l >= 1
    RealField v_cur;         // diffusion of u_cur, buffer reused across steps
    RealField v_prev;        // diffusion of u_prev
    bool have_prev = false;

    const auto snapshot = [&](int iter, const PhaseField& s) {
        if (on_snapshot && snapshot_stride > 0 && iter % snapshot_stride == 0) {
            on_snapshot(iter, s);
        }
    };
    snapshot(0, u_cur);

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        apply_semigroup_into(u_cur, spectrum, v_cur);

        // v_cur is the diffusion of iterate iter-1; with it we can finish
        // that iterate's energy and movement entries.
        if (cfg.record_energy && have_prev) {
            rec.energy.push_back(energy_from_diffusion(u_cur, v_cur, cfg.h));
            rec.movement.push_back(
                movement_from_diffusions(u_cur, u_prev, v_cur, v_prev, cfg.h));
        }

        PhaseField u_next =
            cfg.volume_target
                ? volume_threshold(clamp_real_to_obstacles(v_cur, obs), obs,
                                   *cfg.volume_target)
                : clamp_to_obstacles(threshold(v_cur), obs);

        const std::int64_t flips = count_flips(u_next, u_cur);
        rec.flips.push_back(flips);
        rec.area_fraction.push_back(area_fraction(u_next));
        rec.iterations_run = iter;

        if (flips == 0) {
            if (cfg.record_energy) {
                // u^iter equals u^{iter-1}, whose energy is either already
                // recorded or, on an immediate fixed point, computable from
                // the diffusion at hand.
                rec.energy.push_back(rec.energy.empty()
                                         ? energy_from_diffusion(u_cur, v_cur, cfg.h)
                                         : rec.energy.back());
                rec.movement.push_back(0.0);
            }
            snapshot(iter, u_next);
            rec.termination = Termination::steady_state;
            return {std::move(u_next), std::move(rec)};
        }

        snapshot(iter, u_next);
        u_prev = std::move(u_cur);
        std::swap(v_prev, v_cur); // keep both buffers alive for reuse
        u_cur = std::move(u_next);
        have_prev = true;
    }

    if (cfg.record_energy) {
        // the final iterate never got its diffusion computed; one extra
        // transform closes the books
        const RealField v_last = apply_semigroup(u_cur, spectrum);
        rec.energy.push_back(energy_from_diffusion(u_cur, v_last, cfg.h));
        rec.movement.push_back(
            movement_from_diffusions(u_cur, u_prev, v_last, v_prev, cfg.h));
    }
    rec.termination = Termination::max_iters;
    return {std::move(u_cur), std::move(rec)};
}

} // namespace obmbo
