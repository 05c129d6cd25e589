#pragma once

#include "obmbo/grid.hpp"
#include "obmbo/scheme.hpp"

#include <cstdint>
#include <vector>

namespace obmbo {

/// Number of 4-connected components of the +1 set, with wraparound across
/// the torus seam. Optionally fills `labels` with a component id per +1 cell
/// and -1 elsewhere.
int connected_components(const PhaseField& u, std::vector<int>* labels = nullptr);

/// Random invasion setup: N_d = round(concentration * a_syst) seed disks of
/// area 1/a_syst each are dropped uniformly at random, clamped from inside,
/// and grown to their joint steady state. A clamped outer frame of
/// padding_width cells isolates the picture from the periodic seam;
/// width -1 selects ceil(4 sqrt(h) n) cells, width 0 disables the frame
/// (centers then sample the whole torus).
struct InvasionConfig {
    double a_syst = 400.0;
    double concentration = 0.3;
    int n = 1024;
    double h = 0.0; // <= 0 picks the default r_d^2 / 16
    std::uint64_t seed = 1;
    int padding_width = -1;
    int max_iters = 4000;
    bool record_energy = true;

    double disk_radius() const;
    int disk_count() const;
    double resolved_h() const;
    int resolved_padding(double h_eff) const;
};

struct InvasionResult {
    PhaseField final_state;
    RunRecord record;
    ObstacleSet obstacles;
    std::vector<TorusPoint> centers;
    double obstacle_fraction = 0.0; // |Phi| / N after rasterization
};

InvasionResult invasion_run(const InvasionConfig& cfg, int snapshot_stride = 0,
                            const SnapshotFn& on_snapshot = nullptr);

/// Three clamped disks: a touching pair stacked vertically plus a single
/// disk to their right, separated by `gap` edge to edge. The touching pair's
/// convex hull is the capsule around the segment joining their centers.
///
/// The default gap is calibrated at n = 1000 so the regime flip sits between
/// h = 8.5e-4 (pair fills its hull, right disk stays separate) and h = 9e-4
/// (everything connects). Measured merge thresholds: the bridge forms up to
/// gap 0.099 at the smaller h and up to 0.101 at the larger, about 3.4
/// kernel widths sqrt(h); 0.1005 is the midpoint of the working window.
struct StudyGeometry {
    double radius = 1.0 / 6.0;
    TorusPoint left_a{0.32, 1.0 / 3.0};
    TorusPoint left_b{0.32, 2.0 / 3.0};
    double gap = 0.1005;

    TorusPoint right_center() const;
    std::vector<TorusPoint> all_centers() const;
    double hull_area() const; // capsule area, analytic
};

/// Cells within `radius` of the segment joining the pair's centers; the
/// discrete version of the pair's convex hull, same inclusive boundary rule
/// as disk rasterization.
std::vector<std::uint8_t> capsule_mask(const StudyGeometry& geometry, GridGeometry geom);

struct SteadyStateStudyConfig {
    StudyGeometry geometry;
    int n = 1000;
    std::vector<double> h_values;
    int max_iters = 4000;
};

struct StudyRow {
    double h = 0.0;
    int iterations = 0;
    Termination termination = Termination::max_iters;
    int components = 0;
    /// Area of the symmetric difference between the steady component(s)
    /// grown from the touching pair and the rasterized capsule, in area
    /// units (cells * eps^2).
    double hull_error = 0.0;
    double area_fraction_final = 0.0;
};

/// One full run per h value, farmed over at most `threads` workers.
std::vector<StudyRow> steady_state_study(const SteadyStateStudyConfig& cfg,
                                         int threads = 1);

/// Hull error of a finished state against the study geometry; exposed for
/// tests and the study itself.
double hull_error_area(const PhaseField& final_state, const StudyGeometry& geometry);

struct BenchRow {
    int n = 0;
    std::size_t cells = 0;
    double seconds_per_iter = 0.0;
};

/// Times plain scheme steps (disk initial state, no obstacles) for each grid
/// side after a short warmup. Each size is timed three times over `iters`
/// steps and the median block is reported.
std::vector<BenchRow> bench(const std::vector<int>& sizes, double h, int iters);

} // namespace obmbo
