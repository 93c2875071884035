#pragma once

// Closed-form reference values: Gamma, Bessel J_nu and its first zero, the
// Hardy-weight Robin eigenvalue curve on the unit ball, and the two explicit
// radial solutions of Delta u + |grad u|^2 + lambda f = 0 with Robin data.
// Nothing here depends on the discretization, so it can act as an oracle.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "robinrad/error.hpp"

namespace robinrad::specfun {

/// Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 coefficients, the
/// set published by Godfrey), which is accurate to ~1e-15 relative for
/// x >= 1/2; smaller arguments are lifted with Gamma(x) = Gamma(x+1)/x.
inline double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("gamma_fn requires finite x > 0");
    if (x < 0.5) return gamma_fn(x + 1.0) / x;
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    const double z = x - 1.0;
    double a = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) a += c[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    // Split t^(z+1/2) to keep the intermediate finite up to x ~ 171.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * a;
}

inline constexpr double kBesselMaxArgument = 30.0;
inline constexpr double kBesselSeriesLimit = 12.0;

/// J_nu(x) by the ascending series in extended precision for x <= 12, where
/// cancellation costs under 1e-15; the standard library beyond that.
inline double bessel_j(double nu, double x) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("bessel_j requires nu >= 0");
    if (!(x >= 0.0) || x > kBesselMaxArgument) {
        throw InvalidArgument("bessel_j argument out of range [0, 30]: " + std::to_string(x));
    }
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x > kBesselSeriesLimit) return std::cyl_bessel_j(nu, x);
    const long double half = 0.5L * static_cast<long double>(x);
    const long double q = -half * half;
    long double term = std::pow(half, static_cast<long double>(nu)) / static_cast<long double>(gamma_fn(nu + 1.0));
    long double sum = term;
    long double peak = std::abs(term);
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<long double>(k) * (static_cast<long double>(k) + nu));
        sum += term;
        peak = std::max(peak, std::abs(term));
        if (std::abs(term) < 1e-20L * peak && std::abs(term) < 1e-18L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

/// First positive zero j_{nu,1}: march on (0, nu + 10] for a sign change,
/// then bisect.
inline double first_zero(double nu) {
    if (!(nu >= 0.0) || nu > 10.0) throw InvalidArgument("first_zero requires 0 <= nu <= 10");
    constexpr double step = 0.05;
    const double limit = nu + 10.0;
    double lo = step;
    double flo = bessel_j(nu, lo);
    for (double hi = lo + step; hi <= limit + 1e-12; hi += step) {
        const double fhi = bessel_j(nu, hi);
        if ((flo > 0.0) != (fhi > 0.0)) {
            while (hi - lo > 1e-13 * hi) {
                const double mid = 0.5 * (lo + hi);
                const double fm = bessel_j(nu, mid);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
        flo = fhi;
    }
    throw NoSignChange("no sign change of J_nu found on (0, nu + 10]");
}

/// lambda_{1,f,gamma} for f = |x|^{-2} on the unit ball in R^N:
/// gamma (N - 2 - gamma) below (N-2)/2, the Hardy constant from there on.
inline double hardy_lambda(double gamma, int N) {
    if (N < 3) throw InvalidArgument("hardy_lambda requires N >= 3");
    const double half = 0.5 * (N - 2);
    if (gamma < half) return gamma * ((N - 2) - gamma);
    return half * half;
}

/// Explicit solution of Delta u + |grad u|^2 + lambda = 0 in B_1,
/// du/dnu + beta u = 0, with mu = sqrt(lambda) and alpha = (N-2)/2:
///   u(r) = (mu/beta) J_{N/2}(mu)/J_alpha(mu) + log(r^{-alpha} J_alpha(mu r) / J_alpha(mu)).
inline double bessel_bvp_u(double r, int N, double lambda, double beta) {
    if (N < 3) throw InvalidArgument("bessel_bvp_u requires N >= 3");
    if (!(r > 0.0) || r > 1.0) throw InvalidArgument("bessel_bvp_u requires 0 < r <= 1");
    if (!(beta > 0.0)) throw InvalidArgument("bessel_bvp_u requires beta > 0");
    if (!(lambda >= 0.0)) throw InvalidArgument("bessel_bvp_u requires lambda >= 0");
    if (lambda == 0.0) return 0.0;
    const double alpha = 0.5 * (N - 2);
    const double j1 = first_zero(alpha);
    if (lambda >= j1 * j1) {
        throw InvalidArgument("lambda must lie below the squared first zero of J_{(N-2)/2}");
    }
    const double mu = std::sqrt(lambda);
    const double ja = bessel_j(alpha, mu);
    const double amplitude = (mu / beta) * bessel_j(alpha + 1.0, mu) / ja;
    return amplitude + std::log(std::pow(r, -alpha) * bessel_j(alpha, mu * r) / ja);
}

/// alpha_1 = (-(N-2) + sqrt((N-2)^2 - 4 lambda)) / 2, the larger root of
/// alpha^2 + (N-2) alpha + lambda = 0.
inline double hardy_exponent(int N, double lambda) {
    const double a = N - 2.0;
    const double disc = a * a - 4.0 * lambda;
    if (disc < 0.0) throw DiscriminantNegative("lambda exceeds (N-2)^2/4; no real power solution");
    return 0.5 * (-a + std::sqrt(disc));
}

/// Explicit solution for the Hardy source lambda |x|^{-2}:
///   u(r) = alpha_1 (log r - 1/beta).
inline double power_bvp_u(double r, int N, double lambda, double beta) {
    if (N < 3) throw InvalidArgument("power_bvp_u requires N >= 3");
    if (!(r > 0.0) || r > 1.0) throw InvalidArgument("power_bvp_u requires 0 < r <= 1");
    if (!(beta > 0.0)) throw InvalidArgument("power_bvp_u requires beta > 0");
    if (!(lambda >= 0.0)) throw InvalidArgument("power_bvp_u requires lambda >= 0");
    const double a1 = hardy_exponent(N, lambda);
    return a1 * (std::log(r) - 1.0 / beta);
}

} // namespace robinrad::specfun
