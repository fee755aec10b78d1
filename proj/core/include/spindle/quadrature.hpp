#pragma once
#include <functional>
#include <utility>
#include <vector>

namespace spindle {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_subdiv = 400;
};

/// Adaptive quadrature of f over [a, b]. Throws QuadratureFailure if the
/// requested tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opts = {});

/// Same, after the substitution s = mid - half*cos(phi). Square-root and
/// inverse-square-root endpoint behavior of f becomes smooth in phi, so the
/// adaptive rule converges at full order.
double integrate_cos_substituted(const std::function<double(double)>& f,
                                 double a, double b,
                                 const QuadOptions& opts = {});

/// Piecewise integration of f over [a, b], split at the interior breakpoints
/// (unsorted, possibly outside (a,b); irrelevant ones are ignored).
double integrate_piecewise(const std::function<double(double)>& f, double a,
                           double b, std::vector<double> breaks,
                           const QuadOptions& opts = {});

/// Brent root refinement on a bracket [a, b] with f(a)*f(b) <= 0.
/// `xtol` is the absolute tolerance on the root location.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol);

/// Evaluate f on n+1 equispaced points of [a, b] and return the bracketing
/// subintervals where the sign changes (endpoints with f == 0 included).
std::vector<std::pair<double, double>> sign_change_brackets(
    const std::function<double(double)>& f, double a, double b, int n);

}  // namespace spindle
