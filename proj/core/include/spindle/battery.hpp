#pragma once
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "spindle/profile.hpp"
#include "spindle/systole.hpp"

namespace spindle {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct BatteryOptions {
    int eta_grid_n = 201;
    unsigned jobs = 0;  ///< 0 = hardware concurrency
    std::uint64_t seed = 20240817;
    int conservation_orbits = 100;
};

/// Admissible random odd correction for the closed-geodesic family: draws
/// coefficients and rescales so |h| stays below (m+n)/2 with margin.
BesseSpec random_besse_spec(OrbifoldSignature sig, std::mt19937_64& rng,
                            int n_coeffs = 3);

/// Run the whole verification battery on the built-in corpus: the
/// closed-geodesic equality suite, round-sphere exactness, strict-inequality
/// margins for perturbed metrics, cross-route consistency, the winding
/// identity, closure re-integration, conservation/property checks, the
/// pole-deformation systolic-ratio experiment, and the far-bump
/// ratio-increase experiment. One result per battery item; `log` (optional)
/// receives per-profile progress lines.
std::vector<CheckResult> run_battery(const BatteryOptions& opts,
                                     std::ostream* log = nullptr);

}  // namespace spindle
