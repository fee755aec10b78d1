#pragma once
#include <optional>
#include <variant>
#include <vector>

#include "spindle/profile.hpp"

namespace spindle {

/// Point of the unit tangent bundle over the regular part, in coordinates
/// (theta, beta, s): theta unwrapped rotation angle, beta angle against the
/// positive parallel direction, s meridional arclength in (0, M).
struct PhasePoint {
    double theta = 0;
    double beta = 0;
    double s = 0;
};

enum class EventKind { SectionCross, PolePassage, Truncated };

struct TrajectoryEvent {
    double t = 0;
    EventKind kind = EventKind::SectionCross;
};

struct Trajectory {
    std::vector<double> times;        ///< strictly increasing sample times
    std::vector<PhasePoint> states;   ///< one per time
    double clairaut_drift = 0;        ///< max |K - K0| over stored samples
    std::vector<TrajectoryEvent> events;
};

/// Clairaut first integral K = r(s) cos(beta).
double clairaut(const MetricProfile& p, const PhasePoint& x);

struct IntegrateOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    bool record = true;               ///< keep all accepted-step samples
    std::optional<double> section_s;  ///< detect crossings of s = section_s with ds/dt > 0
    int stop_after_crossings = 0;     ///< 0 = record crossings but do not stop
    double pole_guard_factor = 1e-6;  ///< truncation band, fraction of M
    std::size_t max_steps = 20000000;
};

/// Integrate the geodesic equations
///   theta' = cos(beta)/r,  beta' = r'(s) cos(beta)/r,  s' = sin(beta)
/// (unit speed: arclength = time) from x0 up to t_max. Stops early at a
/// requested section crossing or truncates with a PolePassage event when a
/// near-meridional orbit enters the pole guard band.
Trajectory integrate(const MetricProfile& p, const PhasePoint& x0, double t_max,
                     const IntegrateOptions& opts = {});

struct Meridional {};
struct Equatorial { double s = 0; };
struct Oscillating { double s1 = 0, s2 = 0; };
struct Asymptotic { double s_minus = 0, s_plus = 0; };
using OrbitClass = std::variant<Meridional, Equatorial, Oscillating, Asymptotic>;

struct ClassifyOptions {
    double amb_tol = 1e-6;            ///< |K| distance to a critical value, relative to max radius
    double pole_guard_K_factor = 1e-8;///< meridional threshold, relative to r(s0)
    double root_tol = 1e-10;
    int scan_grid_n = 8192;
};

/// Classify the orbit through x0 by the value of the Clairaut integral.
/// Throws ToleranceAmbiguity when |K| is too close to a critical value of r
/// to distinguish oscillating from asymptotic behavior numerically.
OrbitClass classify(const MetricProfile& p, const PhasePoint& x0,
                    const ClassifyOptions& opts = {});

}  // namespace spindle
