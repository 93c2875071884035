#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "robinrad/specfun.hpp"

using namespace robinrad;
using namespace robinrad::specfun;

namespace {

/// Root of tan x = x in (pi, 3pi/2) by Newton on g(x) = sin x - x cos x.
double tan_equals_x_root() {
    double x = 4.5;
    for (int i = 0; i < 50; ++i) x -= (std::sin(x) - x * std::cos(x)) / (x * std::sin(x));
    return x;
}

} // namespace

TEST(Gamma, Identities) {
    EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-14);
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(gamma_fn(5.0), 24.0, 24.0 * 1e-14);
    EXPECT_NEAR(gamma_fn(0.1), std::tgamma(0.1), 1e-13 * std::tgamma(0.1));
    for (double x = 0.05; x < 40.0; x *= 1.37) {
        EXPECT_NEAR(gamma_fn(x) / std::tgamma(x), 1.0, 1e-13) << x;
    }
    EXPECT_THROW(gamma_fn(0.0), InvalidArgument);
}

TEST(Bessel, HalfIntegerClosedForms) {
    for (double x = 0.1; x < 20.0; x += 0.37) {
        const double j12 = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
        const double j32 = std::sqrt(2.0 / (std::numbers::pi * x)) * (std::sin(x) / x - std::cos(x));
        EXPECT_NEAR(bessel_j(0.5, x), j12, 1e-13);
        EXPECT_NEAR(bessel_j(1.5, x), j32, 1e-13);
    }
}

TEST(Bessel, SeriesMatchesStandardLibrary) {
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 3.7}) {
        for (double x = 0.05; x <= kBesselSeriesLimit; x += 0.53) {
            EXPECT_NEAR(bessel_j(nu, x), std::cyl_bessel_j(nu, x), 1e-12) << nu << " " << x;
        }
    }
}

TEST(Bessel, ThreeTermRecurrence) {
    // J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> Nu(1.0, 6.0), X(0.5, 20.0);
    for (int k = 0; k < 200; ++k) {
        const double nu = Nu(rng), x = X(rng);
        const double lhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x);
        const double rhs = 2.0 * nu / x * bessel_j(nu, x);
        const double scale = std::abs(bessel_j(nu - 1.0, x)) + std::abs(bessel_j(nu + 1.0, x)) + std::abs(rhs);
        EXPECT_LE(std::abs(lhs - rhs), 1e-11 * scale) << nu << " " << x;
    }
}

TEST(Bessel, RangeChecks) {
    EXPECT_EQ(bessel_j(0.0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1.0, 0.0), 0.0);
    EXPECT_THROW(bessel_j(-1.0, 1.0), InvalidArgument);
    EXPECT_THROW(bessel_j(1.0, 31.0), InvalidArgument);
}

TEST(FirstZero, HalfIntegerOrders) {
    EXPECT_NEAR(first_zero(0.5), std::numbers::pi, 1e-10);
    EXPECT_NEAR(first_zero(1.5), tan_equals_x_root(), 1e-10);
}

TEST(FirstZero, OrderZeroBracketedByTwoAndThree) {
    EXPECT_GT(bessel_j(0.0, 2.0), 0.0);
    EXPECT_LT(bessel_j(0.0, 3.0), 0.0);
    EXPECT_NEAR(first_zero(0.0), 2.404825557695773, 1e-11);
}

TEST(FirstZero, IncreasingInOrder) {
    double prev = 0.0;
    for (double nu = 0.0; nu <= 5.0; nu += 0.5) {
        const double z = first_zero(nu);
        EXPECT_GT(z, prev);
        prev = z;
    }
}

TEST(HardyLambda, CurveAndPlateau) {
    EXPECT_DOUBLE_EQ(hardy_lambda(0.5, 4), 0.75);
    EXPECT_DOUBLE_EQ(hardy_lambda(2.0, 4), 1.0);
    for (int N = 3; N <= 7; ++N) {
        EXPECT_EQ(hardy_lambda(0.0, N), 0.0);
        const double g = 0.5 * (N - 2);
        EXPECT_DOUBLE_EQ(hardy_lambda(std::nextafter(g, 0.0), N), hardy_lambda(g, N));
    }
    EXPECT_LT(hardy_lambda(-1.0, 4), 0.0);
}

TEST(BesselBvp, ThreeDimensionalReduction) {
    // N = 3: u(r) = (1 - cot 1) + log(sin r / (r sin 1)).
    EXPECT_NEAR(bessel_bvp_u(1.0, 3, 1.0, 1.0), 1.0 - 1.0 / std::tan(1.0), 1e-12);
    EXPECT_NEAR(bessel_bvp_u(1.0, 3, 1.0, 1.0), 0.3579073840656, 1e-12);
    for (double r = 0.01; r <= 1.0; r += 0.07) {
        const double want = (1.0 - 1.0 / std::tan(1.0)) + std::log(std::sin(r) / (r * std::sin(1.0)));
        EXPECT_NEAR(bessel_bvp_u(r, 3, 1.0, 1.0), want, 1e-12);
    }
}

TEST(BesselBvp, BoundaryIdentityAndOde) {
    const double h = 1e-4;
    for (int N : {3, 4, 5}) {
        for (double lambda : {0.5, 2.0}) {
            for (double beta : {0.5, 1.0, 3.0}) {
                auto u = [&](double r) { return bessel_bvp_u(r, N, lambda, beta); };
                const double du1 = (3.0 * u(1.0) - 4.0 * u(1.0 - h) + u(1.0 - 2.0 * h)) / (2.0 * h);
                EXPECT_NEAR(du1 + beta * u(1.0), 0.0, 1e-6);
                for (double r : {0.2, 0.45, 0.8}) {
                    // u'' + (N-1)/r u' + u'^2 + lambda = 0
                    const double d1 = (u(r + h) - u(r - h)) / (2.0 * h);
                    const double d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
                    EXPECT_NEAR(d2 + (N - 1) / r * d1 + d1 * d1 + lambda, 0.0, 1e-6);
                }
            }
        }
    }
}

TEST(BesselBvp, SmallLambdaVanishes) {
    EXPECT_EQ(bessel_bvp_u(0.3, 4, 0.0, 1.0), 0.0);
    EXPECT_LT(std::abs(bessel_bvp_u(0.3, 4, 1e-10, 1.0)), 1e-9);
    EXPECT_THROW(bessel_bvp_u(0.5, 3, 10.0, 1.0), InvalidArgument);
}

TEST(PowerBvp, ClosedFormAndOde) {
    EXPECT_NEAR(power_bvp_u(1.0, 4, 0.75, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(hardy_exponent(4, 0.75), -0.5, 1e-15);
    EXPECT_NEAR(hardy_exponent(3, 0.25), -0.5, 1e-15);
    EXPECT_EQ(power_bvp_u(0.3, 4, 0.0, 1.0), 0.0);
    EXPECT_THROW(hardy_exponent(4, 1.5), DiscriminantNegative);
    const double h = 1e-4;
    for (int N : {3, 4, 6}) {
        const double lambda = 0.2 * (N - 2) * (N - 2);
        auto u = [&](double r) { return power_bvp_u(r, N, lambda, 2.0); };
        for (double r : {0.3, 0.5, 0.9}) {
            const double d1 = (u(r + h) - u(r - h)) / (2.0 * h);
            const double d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
            // u'' + (N-1)/r u' + u'^2 + lambda / r^2 = 0
            EXPECT_NEAR(d2 + (N - 1) / r * d1 + d1 * d1 + lambda / (r * r), 0.0, 1e-6);
        }
    }
}
