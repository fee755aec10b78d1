#pragma once
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace spindle {

inline constexpr double kPi = std::numbers::pi;

/// Index-sharded parallel loop. Results must be written by index so the
/// outcome is independent of scheduling. jobs <= 1 runs serially.
/// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(std::size_t n, unsigned jobs,
                         const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::scoped_lock lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Symmetric grid on (-1+delta, 1-delta) with Chebyshev clustering toward the
/// endpoints. n must be odd so the grid contains 0 exactly.
inline std::vector<double> chebyshev_symmetric_grid(int n, double delta) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double scale = 1.0 - delta;
    for (int j = 0; j < n; ++j) {
        double v = -scale * std::cos(kPi * j / (n - 1));
        if (2 * j == n - 1) v = 0.0;
        g[static_cast<std::size_t>(j)] = v;
    }
    return g;
}

}  // namespace spindle
