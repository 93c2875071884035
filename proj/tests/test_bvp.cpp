#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "robinrad/bvp.hpp"
#include "robinrad/specfun.hpp"

using namespace robinrad;

namespace {

const GradedMesh& mesh1024() {
    static const GradedMesh m = build_mesh(1024);
    return m;
}

} // namespace

TEST(Indicial, Examples) {
    EXPECT_EQ(indicial_exponent(RadialWeight::constant(1.0), Dimension(3), 5.0), 0.0);
    EXPECT_NEAR(indicial_exponent(RadialWeight::hardy(), Dimension(4), 0.75), -0.5, 1e-15);
    EXPECT_NEAR(indicial_exponent(RadialWeight::hardy(), Dimension(4), 1.0), -1.0, 1e-15);
    EXPECT_EQ(indicial_exponent(RadialWeight::hardy(), Dimension(5), 0.0), 0.0);
    EXPECT_THROW(indicial_exponent(RadialWeight::hardy(), Dimension(4), 1.01), DiscriminantNegative);
}

TEST(IntegratePhi, SphericalBesselRatio) {
    // N = 3, f = 1: Phi = sin(r) / r, so Phi'(1) / Phi(1) = cot 1 - 1.
    const auto p = integrate_phi(RadialWeight::constant(1.0), Dimension(3), 1.0, 1e-8);
    EXPECT_NEAR(p.dphi_at_R / p.phi_at_R, 1.0 / std::tan(1.0) - 1.0, 1e-9);
    EXPECT_NEAR(p.phi_at_R, std::sin(1.0), 1e-9);
    EXPECT_TRUE(p.positive);
    for (double r : {0.01, 0.3, 0.77}) EXPECT_NEAR(p.phi(r), std::sin(r) / r, 1e-9) << r;
}

TEST(IntegratePhi, HardyPowerLaw) {
    const auto p = integrate_phi(RadialWeight::hardy(), Dimension(4), 0.75, 1e-8);
    EXPECT_NEAR(p.dphi_at_R / p.phi_at_R, -0.5, 1e-9);
    for (double r : {1e-6, 0.01, 0.5}) EXPECT_NEAR(p.phi(r) * std::sqrt(r), 1.0, 1e-9) << r;
}

TEST(IntegratePhi, ZeroLambdaIsConstant) {
    const auto p = integrate_phi(RadialWeight::power(1.0, -1.0), Dimension(3), 0.0, 1e-8);
    EXPECT_EQ(p.phi_at_R, 1.0);
    EXPECT_EQ(p.dphi_at_R, 0.0);
}

TEST(IntegratePhi, RtolHalvingStable) {
    const RadialWeight f({{1.0, 0.0}, {0.5, -1.0}});
    for (double rtol : {1e-8, 1e-10}) {
        const double a = integrate_phi(f, Dimension(4), 2.0, 1e-8, rtol).phi_at_R;
        const double b = integrate_phi(f, Dimension(4), 2.0, 1e-8, 0.5 * rtol).phi_at_R;
        EXPECT_LE(std::abs(a - b), 10.0 * rtol * std::abs(a));
    }
}

TEST(IntegratePhi, RejectsBadArguments) {
    const auto f = RadialWeight::constant(1.0);
    EXPECT_THROW(integrate_phi(f, Dimension(3), -1.0, 1e-8), InvalidArgument);
    EXPECT_THROW(integrate_phi(f, Dimension(3), 1.0, 0.0), InvalidArgument);
    EXPECT_THROW(integrate_phi(f, Dimension(3), 1.0, 2.0), InvalidArgument);
}

TEST(Amplitude, Examples) {
    const auto h = integrate_phi(RadialWeight::hardy(), Dimension(4), 0.75, 1e-8);
    EXPECT_NEAR(amplitude(h, 2.0), 0.25, 1e-9);
    const auto s = integrate_phi(RadialWeight::constant(1.0), Dimension(3), 1.0, 1e-8);
    EXPECT_NEAR(amplitude(s, 1.0), 1.0 - 1.0 / std::tan(1.0) - std::log(std::sin(1.0)), 1e-9);
    EXPECT_THROW(amplitude(h, 0.0), InvalidArgument);
    // Past the first zero of sin r / r on the unit ball.
    const auto neg = integrate_phi(RadialWeight::constant(1.0), Dimension(3), 12.0, 1e-8);
    EXPECT_THROW(amplitude(neg, 1.0), NoPositiveSolution);
}

TEST(SolveBvp, BesselClosedForm) {
    const auto s = solve_bvp(RadialWeight::constant(1.0), Dimension(3), 1.0, 1.0, 1.0, mesh1024());
    EXPECT_NEAR(s.u(1.0), 1.0 - 1.0 / std::tan(1.0), 1e-9);
    for (const auto& [r, u] : s.u_samples) EXPECT_NEAR(u, specfun::bessel_bvp_u(r, 3, 1.0, 1.0), 1e-9) << r;
    EXPECT_LT(s.boundary_residual, 1e-10);
    EXPECT_LT(s.weak_residual, 1e-6);
    EXPECT_GT(s.margin_to_dirichlet, 0.0);
}

TEST(SolveBvp, OtherDimensionsMatchBessel) {
    for (int N : {4, 5}) {
        for (double beta : {0.5, 3.0}) {
            const auto s = solve_bvp(RadialWeight::constant(1.0), Dimension(N), 2.0, beta, 1.0, mesh1024());
            for (double r : {0.05, 0.5, 1.0}) EXPECT_NEAR(s.u(r), specfun::bessel_bvp_u(r, N, 2.0, beta), 1e-8);
        }
    }
}

TEST(SolveBvp, HardyPowerSolution) {
    const auto s = solve_bvp(RadialWeight::hardy(), Dimension(4), 0.75, 1.0, 1.0, mesh1024());
    for (const auto& [r, u] : s.u_samples) {
        EXPECT_GE(r, kSingularOutputCutoff);
        EXPECT_NEAR(u, specfun::power_bvp_u(r, 4, 0.75, 1.0), 1e-8) << r;
    }
    EXPECT_NEAR(s.log_amplitude, 0.5, 1e-9);
}

TEST(SolveBvp, GateRejectsAboveDirichlet) {
    EXPECT_THROW(solve_bvp(RadialWeight::constant(1.0), Dimension(3), 10.0, 1.0, 1.0, mesh1024()),
                 ExistenceGateFailed);
    // sigma0 enters through sigma0 * lambda.
    EXPECT_THROW(solve_bvp(RadialWeight::constant(1.0), Dimension(3), 5.0, 1.0, 2.0, mesh1024()),
                 ExistenceGateFailed);
    EXPECT_THROW(solve_bvp(RadialWeight::hardy(), Dimension(4), 1.5, 1.0, 1.0, mesh1024()), ExistenceGateFailed);
}

TEST(SolveBvp, GateConsistentWithDirichletEigenvalue) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> C(0.1, 2.0), P(-1.5, 2.0), T(0.2, 1.8);
    const auto mesh = build_mesh(512);
    for (int k = 0; k < 30; ++k) {
        const RadialWeight f({{C(rng), 0.0}, {C(rng), P(rng)}});
        const Dimension dim(3 + k % 3);
        const double lD = dirichlet_eigenvalue(f, dim, mesh).lambda;
        const double lambda = T(rng) * lD;
        if (lambda < lD) {
            const auto s = solve_bvp(f, dim, lambda, 1.0, 1.0, mesh, BvpOptions{1e-10, 1e-8, false});
            EXPECT_GT(s.margin_to_dirichlet, 0.0);
            EXPECT_TRUE(std::isfinite(s.log_amplitude));
        } else {
            EXPECT_THROW(solve_bvp(f, dim, lambda, 1.0, 1.0, mesh), ExistenceGateFailed);
        }
    }
}

TEST(SolveBvp, HopfColeAndSigmaScaling) {
    const RadialWeight f({{1.0, 0.0}, {0.4, -1.0}});
    const auto a = solve_bvp(f, Dimension(4), 1.0, 2.0, 1.0, mesh1024());
    const auto b = solve_bvp(f, Dimension(4), 0.5, 2.0, 2.0, mesh1024());
    for (double r : {0.01, 0.4, 1.0}) {
        EXPECT_NEAR(b.u(r), 0.5 * a.u(r), 1e-10);
        EXPECT_NEAR(a.v(r), std::exp(a.log_amplitude) * a.phi.phi(r), 1e-12 * a.v(r));
    }
}

TEST(SolveBvp, LogAmplitudeIncreasesWithLambda) {
    double prev = -INFINITY;
    for (double lambda : {0.5, 2.0, 5.0, 8.0, 9.5}) {
        const auto s = solve_bvp(RadialWeight::constant(1.0), Dimension(3), lambda, 1.0, 1.0, mesh1024());
        EXPECT_GT(s.log_amplitude, prev);
        prev = s.log_amplitude;
    }
}

TEST(ResidualCheck, Examples) {
    const auto mesh = build_mesh(256);
    const RadialWeight f = RadialWeight::hardy();
    const RadialProfile exact{[](double r) { return specfun::power_bvp_u(r, 4, 0.75, 1.0); },
                              [](double r) { return -0.5 / r; }};
    EXPECT_LT(residual_check(exact, f, Dimension(4), 0.75, 1.0, 1.0, mesh).max_normalized, 1e-12);
    const RadialProfile off{[](double r) { return specfun::power_bvp_u(r, 4, 0.75, 1.0) + 0.01 * r; },
                            [](double r) { return -0.5 / r + 0.01; }};
    EXPECT_GT(residual_check(off, f, Dimension(4), 0.75, 1.0, 1.0, mesh).max_normalized, 1e-3);
    const RadialProfile zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
    EXPECT_EQ(residual_check(zero, f, Dimension(4), 0.0, 1.0, 1.0, mesh).max_normalized, 0.0);
}
