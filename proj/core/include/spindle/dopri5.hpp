#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "spindle/errors.hpp"

namespace spindle {

/// Dormand-Prince 5(4) embedded Runge-Kutta step with the standard 4th-order
/// continuous extension. The stepper is FSAL: k7 of an accepted step is k1 of
/// the next.
template <std::size_t N>
struct Dopri5Dense {
    double t0 = 0, h = 0;
    std::array<double, N> c1{}, c2{}, c3{}, c4{}, c5{};

    /// Interpolated solution at t0 + theta*h, theta in [0,1].
    std::array<double, N> eval(double theta) const {
        std::array<double, N> y;
        const double om = 1.0 - theta;
        for (std::size_t i = 0; i < N; ++i) {
            y[i] = c1[i] +
                   theta * (c2[i] + om * (c3[i] + theta * (c4[i] + om * c5[i])));
        }
        return y;
    }
};

template <std::size_t N, class RHS>
class Dopri5 {
public:
    Dopri5(RHS rhs, double rel_tol, double abs_tol)
        : rhs_(rhs), rtol_(rel_tol), atol_(abs_tol) {}

    void start(double t, const std::array<double, N>& y) {
        t_ = t;
        y_ = y;
        rhs_(t_, y_, k1_);
        h_ = initial_step();
        steps_ = 0;
    }

    double t() const { return t_; }
    const std::array<double, N>& y() const { return y_; }
    const std::array<double, N>& dy() const { return k1_; }
    const Dopri5Dense<N>& dense() const { return dense_; }
    std::size_t steps() const { return steps_; }

    /// Advance by one accepted step, not beyond t_end. Returns the new t.
    double step(double t_end) {
        if (t_end - t_ <= 1e-14 * std::max(1.0, std::abs(t_))) {
            t_ = t_end;
            return t_;
        }
        for (int attempt = 0; attempt < 200; ++attempt) {
            double h = std::min(h_, t_end - t_);
            if (h <= 0) return t_;
            const bool clipped = h < h_;
            if (h_ < 1e-14 * std::max(1.0, std::abs(t_)))
                throw StepFailure("step size underflow at t=" +
                                  std::to_string(t_));

            std::array<double, N> k2, k3, k4, k5, k6, k7, yt, y1;
            auto stage = [&](const std::array<const double*, 6>& ks,
                             const std::array<double, 6>& as, int na) {
                for (std::size_t i = 0; i < N; ++i) {
                    double acc = 0;
                    for (int j = 0; j < na; ++j) acc += as[j] * ks[j][i];
                    yt[i] = y_[i] + h * acc;
                }
            };

            stage({k1_.data()}, {1.0 / 5}, 1);
            rhs_(t_ + h / 5, yt, k2);
            stage({k1_.data(), k2.data()}, {3.0 / 40, 9.0 / 40}, 2);
            rhs_(t_ + 3 * h / 10, yt, k3);
            stage({k1_.data(), k2.data(), k3.data()},
                  {44.0 / 45, -56.0 / 15, 32.0 / 9}, 3);
            rhs_(t_ + 4 * h / 5, yt, k4);
            stage({k1_.data(), k2.data(), k3.data(), k4.data()},
                  {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                   -212.0 / 729},
                  4);
            rhs_(t_ + 8 * h / 9, yt, k5);
            stage({k1_.data(), k2.data(), k3.data(), k4.data(), k5.data()},
                  {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                   -5103.0 / 18656},
                  5);
            rhs_(t_ + h, yt, k6);
            static constexpr std::array<double, 6> b{
                35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                11.0 / 84};
            for (std::size_t i = 0; i < N; ++i) {
                y1[i] = y_[i] +
                        h * (b[0] * k1_[i] + b[2] * k3[i] + b[3] * k4[i] +
                             b[4] * k5[i] + b[5] * k6[i]);
            }
            rhs_(t_ + h, y1, k7);

            // Embedded 4th-order error estimate.
            static constexpr std::array<double, 7> er{
                71.0 / 57600,     0.0,        -71.0 / 16695, 71.0 / 1920,
                -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
            double err = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double e =
                    h * (er[0] * k1_[i] + er[2] * k3[i] + er[3] * k4[i] +
                         er[4] * k5[i] + er[5] * k6[i] + er[6] * k7[i]);
                const double sc =
                    atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y1[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);

            const double fac =
                std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2,
                           10.0);
            if (err <= 1.0) {
                fill_dense(h, y1, k3, k4, k5, k6, k7);
                t_ += h;
                y_ = y1;
                k1_ = k7;  // FSAL
                if (!clipped) h_ = h * fac;
                ++steps_;
                return t_;
            }
            h_ = h * fac;
        }
        throw StepFailure("no acceptable step after 200 attempts at t=" +
                          std::to_string(t_));
    }

private:
    double initial_step() const {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol_ + rtol_ * std::abs(y_[i]);
            d0 += (y_[i] / sc) * (y_[i] / sc);
            d1 += (k1_[i] / sc) * (k1_[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        return std::min(h0, 0.1);
    }

    void fill_dense(double h, const std::array<double, N>& y1,
                    const std::array<double, N>& k3,
                    const std::array<double, N>& k4,
                    const std::array<double, N>& k5,
                    const std::array<double, N>& k6,
                    const std::array<double, N>& k7) {
        static constexpr double d1 = -12715105075.0 / 11282082432.0;
        static constexpr double d3 = 87487479700.0 / 32700410799.0;
        static constexpr double d4 = -10690763975.0 / 1880347072.0;
        static constexpr double d5 = 701980252875.0 / 199316789632.0;
        static constexpr double d6 = -1453857185.0 / 822651844.0;
        static constexpr double d7 = 69997945.0 / 29380423.0;
        dense_.t0 = t_;
        dense_.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const double dy = y1[i] - y_[i];
            const double bspl = h * k1_[i] - dy;
            dense_.c1[i] = y_[i];
            dense_.c2[i] = dy;
            dense_.c3[i] = bspl;
            dense_.c4[i] = dy - h * k7[i] - bspl;
            dense_.c5[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] +
                                d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
    }

    RHS rhs_;
    double rtol_, atol_;
    double t_ = 0, h_ = 0;
    std::array<double, N> y_{}, k1_{};
    Dopri5Dense<N> dense_;
    std::size_t steps_ = 0;
};

}  // namespace spindle
