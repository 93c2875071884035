#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "robinrad/discretization.hpp"

using namespace robinrad;

namespace {

/// Composite Gauss-Legendre (16 points, panels refined geometrically toward
/// a) in long double. Independent of the closed forms under test.
long double reference_integral(double a, double b, double s, BasisProduct p) {
    static const long double x16[8] = {0.0950125098376374401853193354250L, 0.281603550779258913230460501460L,
                                       0.458016777657227386342419442984L, 0.617876244402643748446671764049L,
                                       0.755404408355003033895101194847L, 0.865631202387831743880467897713L,
                                       0.944575023073232576077988415535L, 0.989400934991649932596154173450L};
    static const long double w16[8] = {0.189450610455068496285396723208L, 0.182603415044923588866763667969L,
                                       0.169156519395002538189312079030L, 0.149595988816576732081501730547L,
                                       0.124628971255533872052476282192L, 0.0951585116824927848099251076022L,
                                       0.0622535239386478928628438369944L, 0.0271524594117540948517805724560L};
    const long double h = static_cast<long double>(b) - a;
    auto phi = [&](long double r) -> long double {
        const long double L = (b - r) / h, R = (r - a) / h;
        switch (p) {
        case BasisProduct::One: return 1.0L;
        case BasisProduct::LL: return L * L;
        case BasisProduct::LR: return L * R;
        case BasisProduct::RR: return R * R;
        }
        return 0.0L;
    };
    auto panel = [&](long double lo, long double hi) {
        const long double c = 0.5L * (lo + hi), d = 0.5L * (hi - lo);
        long double s2 = 0.0L;
        for (int i = 0; i < 8; ++i) {
            for (int sg : {-1, 1}) {
                const long double r = c + sg * d * x16[i];
                s2 += w16[i] * phi(r) * std::pow(r, static_cast<long double>(s));
            }
        }
        return s2 * d;
    };
    long double total = 0.0L;
    if (a == 0.0) {
        // Geometric panels toward the origin singularity.
        long double hi = b;
        for (int k = 0; k < 200; ++k) {
            const long double lo = hi * 0.5L;
            total += panel(lo, hi);
            hi = lo;
        }
        return total;
    }
    const int panels = 64;
    for (int k = 0; k < panels; ++k) total += panel(a + h * k / panels, a + h * (k + 1) / panels);
    return total;
}

} // namespace

TEST(BuildMesh, UniformGrading) {
    const auto m = build_mesh(4, 1.0, 1.0);
    const std::vector<double> want = {0, 0.25, 0.5, 0.75, 1};
    ASSERT_EQ(m.nodes().size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(m[i], want[i]);
}

TEST(BuildMesh, QuadraticGrading) {
    const auto m = build_mesh(2, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(m[1], 0.25);
    EXPECT_DOUBLE_EQ(m[2], 1.0);
    const auto h = build_mesh(4, 2.0, 0.5);
    const std::vector<double> want = {0, 0.03125, 0.125, 0.28125, 0.5};
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(h[i], want[i]);
}

TEST(BuildMesh, RejectsBadInput) {
    EXPECT_THROW(build_mesh(1), InvalidArgument);
    EXPECT_THROW(build_mesh(8, 0.5), InvalidArgument);
    EXPECT_THROW(build_mesh(8, 2.0, 0.0), InvalidArgument);
    EXPECT_THROW(GradedMesh::from_nodes({0.0, 0.5, 0.5, 1.0}), InvalidArgument);
    EXPECT_THROW(GradedMesh::from_nodes({0.1, 0.5, 1.0}), InvalidArgument);
}

TEST(ElementIntegral, MatchesQuadratureOnRandomElements) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const BasisProduct all[] = {BasisProduct::One, BasisProduct::LL, BasisProduct::LR, BasisProduct::RR};
    for (int k = 0; k < 400; ++k) {
        // Mix long elements, short elements far from 0 and elements touching 0.
        double a = 0.0;
        const int kind = k % 3;
        if (kind == 1) a = std::pow(10.0, -6.0 * U(rng));
        if (kind == 2) a = 0.3 + U(rng);
        const double h = kind == 2 ? std::pow(10.0, -6.0 * U(rng)) * a : (0.01 + U(rng)) * (a == 0.0 ? 1.0 : a * 3.0);
        const double b = a + h;
        // The reference resolves the origin with 200 geometric panels, enough for s >= -1/2.
        const double s = a == 0.0 ? -0.5 + 5.5 * U(rng) : -1.99 + 6.0 * U(rng);
        for (auto p : all) {
            const long double ref = reference_integral(a, b, s, p);
            const double got = element_integral(a, b, s, p);
            EXPECT_NEAR(got / static_cast<double>(ref), 1.0, 1e-13)
                << "a=" << a << " b=" << b << " s=" << s << " p=" << static_cast<int>(p);
        }
    }
}

TEST(ElementIntegral, HardyWeightOnFirstElementInThreeDimensions) {
    // r^{-2} r^{N-1} = 1 for N = 3, so the mass entries are those of a plain 1D element.
    const double h = 0.01;
    EXPECT_NEAR(element_integral(0.0, h, 0.0, BasisProduct::LL), h / 3.0, 1e-18);
    EXPECT_NEAR(element_integral(0.0, h, 0.0, BasisProduct::LR), h / 6.0, 1e-18);
    EXPECT_NEAR(element_integral(0.0, h, 0.0, BasisProduct::RR), h / 3.0, 1e-18);
}

TEST(Assemble, SymmetricConstantKernelAndExactMass) {
    const auto mesh = build_mesh(64, 2.0, 1.0);
    for (int N : {3, 4, 6}) {
        const auto op = assemble(mesh, Dimension(N), RadialWeight({{1.0, 0.0}, {0.5, -1.5}, {0.25, -2.0}}));
        // Constants lie in the kernel of K.
        const std::vector<double> ones(op.size(), 1.0);
        const auto k1 = op.K.apply(ones);
        double mx = 0.0;
        for (double v : k1) mx = std::max(mx, std::abs(v));
        EXPECT_LT(mx, 1e-12 * op.K.norm_inf());
        EXPECT_EQ(op.k_form(ones), 0.0);
        // m_f[1] = int f r^{N-1} = 1/N + 0.5/(N - 1.5) + 0.25/(N - 2).
        const double want = 1.0 / N + 0.5 / (N - 1.5) + 0.25 / (N - 2.0);
        EXPECT_NEAR(op.mf_form(ones), want, 1e-13 * want);
        EXPECT_NEAR(op.m1_form(ones), 1.0 / N, 1e-15);
        EXPECT_EQ(op.b_form(ones), 1.0);
    }
}

TEST(Assemble, KernelIsOnlyConstants) {
    const auto op = assemble(build_mesh(32), Dimension(3), RadialWeight::constant(1.0));
    std::vector<double> x(op.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 3);
    EXPECT_GT(op.k_form(x), 1e-3);
}

TEST(Assemble, LinearFunctionFormsExact) {
    // u(r) = r: k = int r^{N-1} = 1/N, m_1 = int r^{N+1} = 1/(N+2), hardy m_f = int r^{N-1} = 1/N.
    const auto mesh = build_mesh(37, 1.7, 1.0);
    for (int N : {3, 5}) {
        const auto op = assemble(mesh, Dimension(N), RadialWeight::hardy());
        std::vector<double> x(mesh.nodes().begin(), mesh.nodes().end());
        EXPECT_NEAR(op.k_form(x), 1.0 / N, 1e-14);
        EXPECT_NEAR(op.m1_form(x), 1.0 / (N + 2), 1e-14);
        EXPECT_NEAR(op.mf_form(x), 1.0 / N, 1e-14);
        EXPECT_NEAR(op.K.quadratic_form(x), 1.0 / N, 1e-12);
    }
}

TEST(Assemble, NestedMeshConsistency) {
    // A function piecewise linear on the coarse mesh has identical forms on
    // the refinement obtained by bisecting every element.
    const auto coarse = build_mesh(16, 2.0, 1.0);
    std::vector<double> fine_nodes;
    for (std::size_t i = 0; i + 1 < coarse.nodes().size(); ++i) {
        fine_nodes.push_back(coarse[i]);
        fine_nodes.push_back(0.5 * (coarse[i] + coarse[i + 1]));
    }
    fine_nodes.push_back(1.0);
    const auto fine = GradedMesh::from_nodes(fine_nodes);
    const RadialWeight f({{1.0, 0.0}, {0.3, -1.0}});
    const auto oc = assemble(coarse, Dimension(4), f);
    const auto of = assemble(fine, Dimension(4), f);
    std::vector<double> xc(oc.size());
    for (std::size_t i = 0; i < xc.size(); ++i) xc[i] = std::cos(3.0 * coarse[i]);
    std::vector<double> xf(of.size());
    for (std::size_t i = 0; i < xf.size(); ++i) xf[i] = interpolate(coarse, xc, fine[i]);
    EXPECT_NEAR(of.k_form(xf) / oc.k_form(xc), 1.0, 1e-13);
    EXPECT_NEAR(of.mf_form(xf) / oc.mf_form(xc), 1.0, 1e-13);
    EXPECT_NEAR(of.m1_form(xf) / oc.m1_form(xc), 1.0, 1e-13);
    EXPECT_DOUBLE_EQ(of.b_form(xf), oc.b_form(xc));
}

TEST(Assemble, RobinMatrixTouchesOnlyBoundary) {
    const auto op = assemble(build_mesh(8), Dimension(3), RadialWeight::constant(1.0));
    const auto A = op.robin_matrix(2.5);
    for (std::size_t i = 0; i + 1 < op.size(); ++i) EXPECT_EQ(A.diag[i], op.K.diag[i]);
    EXPECT_DOUBLE_EQ(A.diag.back(), op.K.diag.back() + 2.5);
    EXPECT_EQ(A.offdiag, op.K.offdiag);
}

TEST(Interpolate, PiecewiseLinear) {
    const auto mesh = build_mesh(4, 1.0, 1.0);
    const std::vector<double> x = {0, 1, 4, 9, 16};
    EXPECT_DOUBLE_EQ(interpolate(mesh, x, 0.375), 2.5);
    EXPECT_DOUBLE_EQ(interpolate(mesh, x, 1.0), 16.0);
    EXPECT_DOUBLE_EQ(interpolate(mesh, x, 0.0), 0.0);
}
