#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obmbo {

struct SuiteResult {
    std::string name;
    int checks = 0;
    int violations = 0;
    double seconds = 0.0;
    std::string detail;

    bool ok() const { return violations == 0 && checks > 0; }
};

/// Random 4x4 instances: the spectral scheme step must match the brute-force
/// constrained minimizer of energy + movement + penalty computed through the
/// dense semigroup, field for field, with ties resolved by the threshold
/// rule. Also checks admissibility of the output and one follow-up
/// dissipation step per instance.
SuiteResult verify_minimizer_suite(int instances = 100, std::uint64_t seed = 2024);

/// Spectral transform against the dense eigendecomposition on small grids,
/// random phase and real fields, max-abs tolerance 1e-10.
SuiteResult verify_spectral_suite(const std::vector<int>& sizes = {2, 4, 8, 16, 32},
                                  int fields_per_size = 20, double tol = 1e-10,
                                  std::uint64_t seed = 7);

/// Ordered pairs under shared obstacles stay ordered for every step, and
/// both trajectories dissipate energy + movement from the first admissible
/// iterate on.
SuiteResult verify_monotonicity_suite(int pairs = 200, int steps = 50, int n = 64,
                                      std::uint64_t seed = 11);

/// Volume-constrained runs: every iterate carries exactly the target volume,
/// respects the obstacles, and dissipates energy + movement.
SuiteResult verify_volume_suite(int runs = 50, std::uint64_t seed = 23);

} // namespace obmbo
