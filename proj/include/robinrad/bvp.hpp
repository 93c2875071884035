#pragma once

// Radial solutions of
//   Delta u + sigma0 |grad u|^2 + lambda f = 0   in B_R,
//   du/dnu + beta u = 0                          on dB_R.
// With v = exp(sigma0 u) the equation becomes the linear
//   (r^{N-1} Phi')' + lambda~ f r^{N-1} Phi = 0,  lambda~ = sigma0 lambda,
// and v = A Phi with the amplitude fixed by v' + beta v log v = 0 at r = R.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robinrad/discretization.hpp"
#include "robinrad/domain.hpp"
#include "robinrad/error.hpp"
#include "robinrad/ode.hpp"
#include "robinrad/spectral.hpp"

namespace robinrad {

inline constexpr double kDefaultStartRadiusFactor = 1e-8;
inline constexpr double kDefaultBvpRtol = 1e-10;
/// Reported profiles stop at this fraction of R when u is singular at 0.
inline constexpr double kSingularOutputCutoff = 1e-3;

/// Larger root of alpha^2 + (N-2) alpha + lambda~ c_{-2} = 0, where c_{-2} is
/// the coefficient of the r^{-2} term of f. Zero for weights without one.
inline double indicial_exponent(const RadialWeight& f, Dimension dim, double lambda_tilde) {
    const double a = dim.as_double() - 2.0;
    const double c = f.hardy_coefficient();
    if (c == 0.0) return 0.0;
    const double disc = a * a - 4.0 * lambda_tilde * c;
    if (disc < 0.0) {
        throw DiscriminantNegative("lambda~ * c_{-2} = " + std::to_string(lambda_tilde * c) +
                                   " exceeds the Hardy constant (N-2)^2/4 = " + std::to_string(0.25 * a * a));
    }
    return 0.5 * (-a + std::sqrt(disc));
}

/// Phi(r) and w(r) = r^{N-1} Phi'(r) on (0, R]: Frobenius expansion below the
/// start radius, dense Runge-Kutta output above it.
class PhiSolution {
public:
    std::vector<std::pair<double, double>> samples; // (r, Phi(r))
    double phi_at_R = 0.0;
    double dphi_at_R = 0.0;
    double indicial_exponent = 0.0;
    double start_radius = 0.0;
    double radius = 1.0;
    bool positive = false;   // Phi > 0 at every accepted step
    std::size_t steps = 0;

    double phi(double r) const {
        if (r < start_radius) return seed(r)[0];
        return traj_(std::min(r, radius))[0];
    }
    /// r^{N-1} Phi'(r)
    double flux(double r) const {
        if (r < start_radius) return seed(r)[1];
        return traj_(std::min(r, radius))[1];
    }
    double dphi(double r) const { return flux(r) / std::pow(r, dim_ - 1.0); }

private:
    friend PhiSolution integrate_phi(const RadialWeight&, Dimension, double, double, double, double,
                                     std::span<const double>);

    /// Phi ~ r^a (1 + sum_t c_t r^{p_t + 2}) over the non-Hardy terms.
    ode::State<2> seed(double r) const {
        double phi = 1.0, dphi_scaled = indicial_exponent; // r^{1-a} Phi'
        for (const auto& [coef, expo] : corrections_) {
            const double rp = std::pow(r, expo);
            phi += coef * rp;
            dphi_scaled += coef * (indicial_exponent + expo) * rp;
        }
        const double ra = std::pow(r, indicial_exponent);
        return {ra * phi, ra * dphi_scaled * std::pow(r, dim_ - 2.0)};
    }

    int dim_ = 3;
    std::vector<std::pair<double, double>> corrections_; // (coefficient, exponent p + 2)
    ode::DenseTrajectory<2> traj_;
};

/// Integrate the linear mode from the start radius outward with an embedded
/// Dormand-Prince pair controlled to `rtol`, seeded by the leading Frobenius
/// terms Phi(eps) = eps^{a1} (1 + ...).
inline PhiSolution integrate_phi(const RadialWeight& f, Dimension dim, double lambda_tilde, double start_radius,
                                 double rtol = kDefaultBvpRtol, double radius = 1.0,
                                 std::span<const double> output_radii = {}) {
    if (!(lambda_tilde >= 0.0) || !std::isfinite(lambda_tilde)) throw InvalidArgument("lambda~ must be >= 0");
    if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
    if (!(start_radius > 0.0) || !(start_radius < radius)) {
        throw InvalidArgument("start radius must lie in (0, R)");
    }
    if (!(rtol > 0.0)) throw InvalidArgument("rtol must be positive");

    PhiSolution sol;
    sol.dim_ = dim.value();
    sol.radius = radius;
    sol.start_radius = start_radius;
    sol.indicial_exponent = indicial_exponent(f, dim, lambda_tilde);

    const double N = dim.as_double();
    const double a1 = sol.indicial_exponent;
    const double hardy = lambda_tilde * f.hardy_coefficient();
    // First correction per non-Hardy term: c = -lambda~ c_t / P(a1 + p_t + 2),
    // P(m) = m (m + N - 2) + lambda~ c_{-2} being the indicial polynomial.
    for (const auto& t : f.terms()) {
        if (t.exponent == kHardyExponent || lambda_tilde == 0.0) continue;
        const double m = a1 + t.exponent + 2.0;
        const double P = m * (m + N - 2.0) + hardy;
        sol.corrections_.emplace_back(-lambda_tilde * t.coefficient / P, t.exponent + 2.0);
    }

    auto rhs = [&](double r, const ode::State<2>& y) -> ode::State<2> {
        const double rn1 = std::pow(r, N - 1.0);
        return {y[1] / rn1, -lambda_tilde * f(r) * rn1 * y[0]};
    };
    ode::Options opts;
    opts.rtol = rtol;
    opts.initial_step = 1e-2 * start_radius;
    sol.traj_ = ode::integrate<2>(rhs, start_radius, sol.seed(start_radius), radius, opts);
    sol.steps = sol.traj_.segments.size();

    sol.positive = sol.traj_.y_start[0] > 0.0;
    for (const auto& seg : sol.traj_.segments) sol.positive = sol.positive && seg.rcont[0][0] > 0.0;
    sol.positive = sol.positive && sol.traj_.y_end[0] > 0.0;

    sol.phi_at_R = sol.traj_.y_end[0];
    sol.dphi_at_R = sol.traj_.y_end[1] / std::pow(radius, N - 1.0);
    for (double r : output_radii) sol.samples.emplace_back(r, sol.phi(r));
    return sol;
}

/// log A = -Phi'(R) / (beta Phi(R)) - log Phi(R).
inline double amplitude(const PhiSolution& phi, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
    if (!(phi.phi_at_R > 0.0)) {
        throw NoPositiveSolution("Phi(R) = " + std::to_string(phi.phi_at_R) +
                                 " <= 0: the linear mode crossed zero, so sigma0*lambda is at or above the "
                                 "first weighted Dirichlet eigenvalue (necessity lambda <= lambda_1,f)");
    }
    return -phi.dphi_at_R / (beta * phi.phi_at_R) - std::log(phi.phi_at_R);
}

/// u and u' evaluated pointwise on (0, R].
struct RadialProfile {
    std::function<double(double)> u;
    std::function<double(double)> du;
};

struct ResidualReport {
    double max_normalized = 0.0; // max_i |res_i| / scale_i
    double max_absolute = 0.0;
    std::size_t worst_index = 0;
    std::vector<double> residuals;
};

namespace detail {

/// 8-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

} // namespace detail

/// Radial weak residual
///   int (u' phi' - (sigma0 u'^2 + lambda f) phi) r^{N-1} dr + beta u(R) phi(R) R^{N-1}
/// for every hat function of the mesh, each normalized by the sum of the
/// magnitudes of its terms.
inline ResidualReport residual_check(const RadialProfile& profile, const RadialWeight& f, Dimension dim,
                                     double lambda, double beta, double sigma0, const GradedMesh& mesh) {
    const auto r = mesh.nodes();
    const std::size_t m = r.size();
    const double nm1 = dim.as_double() - 1.0;
    std::vector<double> res(m, 0.0), scale(m, 0.0);
    for (std::size_t e = 0; e + 1 < m; ++e) {
        const double a = r[e], b = r[e + 1], h = b - a;
        for (std::size_t g = 0; g < detail::kGaussNodes.size(); ++g) {
            const double x = a + 0.5 * h * (detail::kGaussNodes[g] + 1.0);
            const double w = 0.5 * h * detail::kGaussWeights[g] * std::pow(x, nm1);
            const double up = profile.du(x);
            const double src = sigma0 * up * up + lambda * f(x);
            const double phiL = (b - x) / h, phiR = (x - a) / h;
            res[e] += w * (-up / h - src * phiL);
            res[e + 1] += w * (up / h - src * phiR);
            scale[e] += w * (std::abs(up) / h + std::abs(src) * phiL);
            scale[e + 1] += w * (std::abs(up) / h + std::abs(src) * phiR);
        }
    }
    const double R = mesh.radius();
    const double boundary = beta * profile.u(R) * std::pow(R, nm1);
    res[m - 1] += boundary;
    scale[m - 1] += std::abs(boundary);

    ResidualReport rep;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = std::abs(res[i]);
        const double norm = scale[i] > 0.0 ? a / scale[i] : 0.0;
        rep.max_absolute = std::max(rep.max_absolute, a);
        if (norm > rep.max_normalized) {
            rep.max_normalized = norm;
            rep.worst_index = i;
        }
    }
    rep.residuals = std::move(res);
    return rep;
}

struct BvpOptions {
    double rtol = kDefaultBvpRtol;
    double start_radius_factor = kDefaultStartRadiusFactor; // eps = factor * R
    bool compute_weak_residual = true;
};

class BVPSolution {
public:
    std::vector<std::pair<double, double>> u_samples; // (r, u(r))
    double log_amplitude = 0.0;
    double lambda = 0.0;
    double lambda_tilde = 0.0;
    double sigma0 = 1.0;
    double beta = 1.0;
    double dirichlet_lambda = 0.0;
    double margin_to_dirichlet = 0.0; // lambda_D - lambda~
    double boundary_residual = 0.0;   // |u'(R) + beta u(R)|
    double weak_residual = 0.0;       // max normalized weak residual over hat functions
    PhiSolution phi;

    double u(double r) const { return (log_amplitude + std::log(phi.phi(r))) / sigma0; }
    double du(double r) const { return phi.flux(r) / (std::pow(r, dim_ - 1.0) * sigma0 * phi.phi(r)); }
    double v(double r) const { return std::exp(sigma0 * u(r)); }

    RadialProfile profile() const {
        return {[this](double r) { return u(r); }, [this](double r) { return du(r); }};
    }

private:
    friend BVPSolution solve_bvp(const RadialWeight&, Dimension, double, double, double, const GradedMesh&,
                                 BvpOptions);
    int dim_ = 3;
};

inline ResidualReport residual_check(const BVPSolution& sol, const RadialWeight& f, Dimension dim, double beta,
                                     double sigma0, const GradedMesh& mesh) {
    return residual_check(sol.profile(), f, dim, sol.lambda, beta, sigma0, mesh);
}

/// Solve the nonlinear Robin problem on the ball of radius mesh.radius().
///
/// Gate: sigma0 * lambda must lie strictly below the discrete first weighted
/// Dirichlet eigenvalue on `mesh`; otherwise ExistenceGateFailed. The gate
/// does not involve beta.
inline BVPSolution solve_bvp(const RadialWeight& f, Dimension dim, double lambda, double beta, double sigma0,
                             const GradedMesh& mesh, BvpOptions opts = {}) {
    RobinParams{0.0, beta, lambda, sigma0}.validate();
    if (!(opts.start_radius_factor > 0.0) || opts.start_radius_factor >= 1.0) {
        throw InvalidArgument("start radius factor must lie in (0, 1)");
    }
    const double R = mesh.radius();
    BVPSolution sol;
    sol.dim_ = dim.value();
    sol.lambda = lambda;
    sol.sigma0 = sigma0;
    sol.beta = beta;
    sol.lambda_tilde = sigma0 * lambda;
    sol.dirichlet_lambda = dirichlet_eigenvalue(f, dim, mesh, SolveOptions{kDefaultEigenTol, false}).lambda;
    sol.margin_to_dirichlet = sol.dirichlet_lambda - sol.lambda_tilde;

    const auto gate_message = [&](const std::string& detail) {
        return "necessity lambda <= lambda_1,f violated: sigma0*lambda = " + std::to_string(sol.lambda_tilde) +
               " vs first weighted Dirichlet eigenvalue " + std::to_string(sol.dirichlet_lambda) + detail;
    };
    if (sol.lambda_tilde >= sol.dirichlet_lambda) {
        throw ExistenceGateFailed(gate_message(""), sol.lambda_tilde, sol.dirichlet_lambda);
    }
    try {
        (void)indicial_exponent(f, dim, sol.lambda_tilde);
    } catch (const DiscriminantNegative& e) {
        // lambda~ c_{-2} above the Hardy constant already exceeds the continuous
        // Dirichlet eigenvalue, which is at most (N-2)^2 / (4 c_{-2}).
        throw ExistenceGateFailed(gate_message(std::string(" (") + e.what() + ")"), sol.lambda_tilde,
                                  sol.dirichlet_lambda);
    }

    const double eps = opts.start_radius_factor * R;
    std::vector<double> out;
    sol.phi = integrate_phi(f, dim, sol.lambda_tilde, eps, opts.rtol, R);
    const double cutoff = sol.phi.indicial_exponent < 0.0 ? std::max(kSingularOutputCutoff * R, eps) : eps;
    for (double r : mesh.nodes())
        if (r >= cutoff) out.push_back(r);
    for (double r : out) sol.phi.samples.emplace_back(r, sol.phi.phi(r));

    sol.log_amplitude = amplitude(sol.phi, beta);
    for (double r : out) sol.u_samples.emplace_back(r, sol.u(r));

    const double uR = sol.u(R);
    const double duR = sol.phi.dphi_at_R / (sigma0 * sol.phi.phi_at_R);
    sol.boundary_residual = std::abs(duR + beta * uR);
    if (opts.compute_weak_residual) {
        sol.weak_residual = residual_check(sol, f, dim, beta, sigma0, mesh).max_normalized;
    }
    return sol;
}

} // namespace robinrad
