#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the standard fourth-order
// continuous extension (Hairer, Norsett & Wanner, "Solving ODEs I", DOPRI5).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "robinrad/error.hpp"

namespace robinrad::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 0.0;
    double initial_step = 0.0; // 0: (x1 - x0) * 1e-6
    std::size_t max_steps = 200000;
};

template <std::size_t D>
using State = std::array<double, D>;

/// One accepted step with its dense-output coefficients.
template <std::size_t D>
struct Segment {
    double x0;
    double h;
    std::array<State<D>, 5> rcont;

    State<D> eval(double x) const {
        const double t = (x - x0) / h;
        const double t1 = 1.0 - t;
        State<D> y;
        for (std::size_t i = 0; i < D; ++i) {
            y[i] = rcont[0][i] + t * (rcont[1][i] + t1 * (rcont[2][i] + t * (rcont[3][i] + t1 * rcont[4][i])));
        }
        return y;
    }
};

template <std::size_t D>
class DenseTrajectory {
public:
    std::vector<Segment<D>> segments;
    State<D> y_start{};
    State<D> y_end{};
    std::size_t rejected = 0;

    double x_start() const { return segments.front().x0; }
    double x_end() const { return segments.back().x0 + segments.back().h; }

    State<D> operator()(double x) const {
        if (x <= x_start()) return y_start;
        if (x >= x_end()) return y_end;
        auto it = std::upper_bound(segments.begin(), segments.end(), x,
                                   [](double v, const Segment<D>& s) { return v < s.x0; });
        return std::prev(it)->eval(x);
    }
};

namespace dp {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
} // namespace dp

/// Integrate y' = rhs(x, y) from x0 to x1 > x0.
template <std::size_t D, class Rhs>
DenseTrajectory<D> integrate(Rhs&& rhs, double x0, const State<D>& y0, double x1, const Options& opts) {
    using namespace dp;
    if (!(x1 > x0)) throw InvalidArgument("integration interval must be increasing");
    if (!(opts.rtol > 0.0)) throw InvalidArgument("rtol must be positive");

    DenseTrajectory<D> traj;
    traj.y_start = y0;

    auto axpy = [](const State<D>& y, double h, std::initializer_list<std::pair<double, const State<D>*>> terms) {
        State<D> out = y;
        for (const auto& [c, k] : terms) {
            if (c == 0.0) continue;
            for (std::size_t i = 0; i < D; ++i) out[i] += h * c * (*k)[i];
        }
        return out;
    };

    double x = x0;
    State<D> y = y0;
    State<D> k1 = rhs(x, y);
    double h = opts.initial_step > 0.0 ? opts.initial_step : (x1 - x0) * 1e-6;
    bool last_rejected = false;

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (x + h > x1) h = x1 - x;
        if (h <= std::abs(x) * 8.0 * std::numeric_limits<double>::epsilon()) {
            throw StepSizeUnderflow("step size underflow at x = " + std::to_string(x), x);
        }
        const State<D> k2 = rhs(x + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State<D> k3 = rhs(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<D> k4 = rhs(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<D> k5 = rhs(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<D> k6 = rhs(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<D> ynew = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const double xnew = (x + h >= x1) ? x1 : x + h;
        const State<D> k7 = rhs(xnew, ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = sc > 0.0 ? ei / sc : (ei == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            err += r * r;
        }
        err = std::sqrt(err / D);
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            Segment<D> seg;
            seg.x0 = x;
            seg.h = xnew - x;
            for (std::size_t i = 0; i < D; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                seg.rcont[0][i] = y[i];
                seg.rcont[1][i] = ydiff;
                seg.rcont[2][i] = bspl;
                seg.rcont[3][i] = ydiff - h * k7[i] - bspl;
                seg.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            traj.segments.push_back(seg);
            x = xnew;
            y = ynew;
            k1 = k7;
            if (x >= x1) {
                traj.y_end = y;
                return traj;
            }
            double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h *= fac;
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
            ++traj.rejected;
        }
    }
    throw StepSizeUnderflow("maximum number of steps exceeded before x = " + std::to_string(x1), x);
}

} // namespace robinrad::ode
