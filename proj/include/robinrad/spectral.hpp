#pragma once

// First weighted Robin eigenvalue
//   lambda(gamma) = inf (k[u] + gamma b[u]) / m_f[u]
// on balls, its Dirichlet limit, the gamma sweep and plateau threshold, and
// the trace / norm-equivalence / local-threshold constants built on the same
// discrete forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robinrad/discretization.hpp"
#include "robinrad/domain.hpp"
#include "robinrad/error.hpp"
#include "robinrad/tridiag.hpp"

namespace robinrad {

inline constexpr double kInfiniteGamma = std::numeric_limits<double>::infinity();

struct EigenResult {
    double gamma = 0.0;        // +inf for the Dirichlet problem
    double lambda = 0.0;
    std::vector<double> coefficients; // nodal values of u, nonnegative, m_f[u] = 1
    double trace_value = 0.0;  // u(R)
    double normalization = 0.0; // m_f[u] after normalization
    double lambda_prime = 0.0; // b[u] = R^{N-1} u(R)^2, the derivative in gamma
    double gap = 0.0;          // second minus first pencil eigenvalue
    double residual = 0.0;     // backward error of the eigenpair
};

struct SolveOptions {
    double tol = kDefaultEigenTol;
    bool compute_gap = true;
};

/// Assembled forms for one (f, N, mesh) plus a lazily computed, shared
/// Dirichlet eigenpair. Copies share the cache.
class RadialProblem {
public:
    RadialProblem(const RadialWeight& f, Dimension dim, const GradedMesh& mesh)
        : weight_(f), op_(std::make_shared<const OperatorTriple>(assemble(mesh, dim, f))),
          cache_(std::make_shared<Cache>()) {}

    const OperatorTriple& operators() const noexcept { return *op_; }
    const RadialWeight& weight() const noexcept { return weight_; }
    const GradedMesh& mesh() const noexcept { return op_->mesh; }
    int dimension() const noexcept { return op_->dimension; }

    EigenResult robin(double gamma, SolveOptions opts = {}) const {
        if (std::isnan(gamma) || gamma == -kInfiniteGamma) throw InvalidArgument("gamma must be a number or +inf");
        if (gamma == kInfiniteGamma) return dirichlet(opts);
        const auto& op = *op_;
        EigenResult res;
        res.gamma = gamma;
        const SymTridiag A = op.robin_matrix(gamma);
        if (gamma == 0.0) {
            // Constants annihilate the numerator exactly.
            const std::vector<double> ones(op.size(), 1.0);
            res.coefficients.assign(op.size(), 1.0 / std::sqrt(op.mf_form(ones)));
            res.lambda = 0.0;
            res.residual = 0.0;
        } else {
            EigenPair p = extremal_eigenpair(A, op.Mf, Which::Smallest, opts.tol);
            res.residual = p.residual;
            res.coefficients = std::move(p.vector);
            normalize(res.coefficients);
            const double rq = (op.k_form(res.coefficients) + gamma * op.b_form(res.coefficients)) /
                              op.mf_form(res.coefficients);
            res.lambda = bracketed(rq, p, opts.tol);
        }
        finish(res, A, opts);
        return res;
    }

    /// u(R) = 0: the boundary row and column are removed.
    EigenResult dirichlet(SolveOptions opts = {}) const {
        if (opts.compute_gap && opts.tol == kDefaultEigenTol) {
            std::call_once(cache_->once, [&] { cache_->value = solve_dirichlet(opts); });
            return *cache_->value;
        }
        return solve_dirichlet(opts);
    }

private:
    struct Cache {
        std::once_flag once;
        std::optional<EigenResult> value;
    };

    /// The stiffness form is summed as k_e (x_{e+1} - x_e)^2, free of the
    /// cancellation in forming K - tM. On strongly graded meshes that
    /// cancellation shifts the inertia bracket by up to ~1e-10 relative,
    /// while the form quotient of the eigenvector stays accurate to roundoff.
    static double bracketed(double rq, const EigenPair& p, double tol) {
        const double window = std::max(1e-8, 2.0 * tol) * (1.0 + std::abs(p.value));
        return (rq >= p.bracket_lo - window && rq <= p.bracket_hi + window) ? rq : p.value;
    }

    void normalize(std::vector<double>& x) const {
        const double m = op_->mf_form(x);
        const double s = 1.0 / std::sqrt(m);
        for (auto& v : x) v *= s;
    }

    void finish(EigenResult& res, const SymTridiag& A, const SolveOptions& opts) const {
        const auto& op = *op_;
        res.normalization = op.mf_form(res.coefficients);
        res.trace_value = res.coefficients[op.boundary_index];
        res.lambda_prime = op.b_form(res.coefficients);
        if (opts.compute_gap) {
            res.gap = kth_eigenvalue(A, op.Mf, 2, opts.tol) - res.lambda;
        }
    }

    EigenResult solve_dirichlet(const SolveOptions& opts) const {
        const auto& op = *op_;
        const std::size_t m = op.size() - 1;
        const SymTridiag A = op.K.leading(m);
        const SymTridiag M = op.Mf.leading(m);
        EigenPair p = extremal_eigenpair(A, M, Which::Smallest, opts.tol);
        EigenResult res;
        res.gamma = kInfiniteGamma;
        res.residual = p.residual;
        res.coefficients = std::move(p.vector);
        res.coefficients.push_back(0.0);
        normalize(res.coefficients);
        res.lambda = bracketed(op.k_form(res.coefficients) / op.mf_form(res.coefficients), p, opts.tol);
        res.normalization = op.mf_form(res.coefficients);
        res.trace_value = 0.0;
        res.lambda_prime = 0.0;
        if (opts.compute_gap) res.gap = kth_eigenvalue(A, M, 2, opts.tol) - res.lambda;
        return res;
    }

    RadialWeight weight_;
    std::shared_ptr<const OperatorTriple> op_;
    std::shared_ptr<Cache> cache_;
};

/// Smallest eigenpair of (K + gamma B) x = lambda M_f x, normalized to m_f = 1.
/// gamma = +inf selects the Dirichlet problem.
inline EigenResult robin_eigenvalue(const RadialWeight& f, Dimension dim, double gamma, const GradedMesh& mesh,
                                    SolveOptions opts = {}) {
    return RadialProblem(f, dim, mesh).robin(gamma, opts);
}

inline EigenResult dirichlet_eigenvalue(const RadialWeight& f, Dimension dim, const GradedMesh& mesh,
                                        SolveOptions opts = {}) {
    return RadialProblem(f, dim, mesh).dirichlet(opts);
}

// ---------------------------------------------------------------------------
// gamma sweep

struct SweepSample {
    double gamma = 0.0;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double lambda_prime = std::numeric_limits<double>::quiet_NaN();
    double trace = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    std::string error;
};

struct GammaSweep {
    std::vector<SweepSample> samples;
    double dirichlet_lambda = 0.0;
    bool monotonicity_ok = false;
    bool sign_ok = false;
    bool below_dirichlet_ok = false;

    bool all_ok() const {
        return monotonicity_ok && sign_ok && below_dirichlet_ok &&
               std::all_of(samples.begin(), samples.end(), [](const SweepSample& s) { return s.ok; });
    }
};

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Slack for comparisons between separately computed eigenvalues.
inline double solver_slack(double lambda, double tol) { return 8.0 * tol * (1.0 + std::abs(lambda)); }

} // namespace detail

inline GammaSweep gamma_sweep(const RadialProblem& problem, std::span<const double> gammas,
                              SolveOptions opts = {}) {
    for (std::size_t i = 1; i < gammas.size(); ++i) {
        if (!(gammas[i] > gammas[i - 1])) throw InvalidArgument("sweep gammas must be strictly increasing");
    }
    GammaSweep sweep;
    sweep.dirichlet_lambda = problem.dirichlet().lambda;
    for (double g : gammas) {
        SweepSample s;
        s.gamma = g;
        try {
            const EigenResult r = problem.robin(g, opts);
            s.lambda = r.lambda;
            s.lambda_prime = r.lambda_prime;
            s.trace = r.trace_value;
            s.gap = r.gap;
            s.ok = true;
        } catch (const Error& e) {
            s.error = e.what();
        }
        sweep.samples.push_back(std::move(s));
    }

    sweep.monotonicity_ok = true;
    sweep.sign_ok = true;
    sweep.below_dirichlet_ok = true;
    const SweepSample* prev = nullptr;
    for (const auto& s : sweep.samples) {
        if (!s.ok) continue;
        if (detail::sign_of(s.lambda) != detail::sign_of(s.gamma)) sweep.sign_ok = false;
        if (s.lambda > sweep.dirichlet_lambda + detail::solver_slack(sweep.dirichlet_lambda, opts.tol)) {
            sweep.below_dirichlet_ok = false;
        }
        if (prev && s.lambda < prev->lambda - detail::solver_slack(s.lambda, opts.tol)) sweep.monotonicity_ok = false;
        prev = &s;
    }
    return sweep;
}

inline GammaSweep gamma_sweep(const RadialWeight& f, Dimension dim, std::span<const double> gammas,
                              const GradedMesh& mesh, SolveOptions opts = {}) {
    return gamma_sweep(RadialProblem(f, dim, mesh), gammas, opts);
}

// ---------------------------------------------------------------------------
// plateau threshold

struct PlateauOptions {
    double tol = 1e-3;               // relative localization of gamma_bar
    double gamma_min = 1e-2;
    double gamma_max = 1e4;
    int points_per_decade = 8;
    /// A plateau is reported only if d log lambda' / d log gamma drops below
    /// this. Where the minimizer persists, lambda_D - lambda(gamma) ~ C/gamma
    /// and the slope tends to -2 from above.
    double slope_threshold = -3.0;
};

struct PlateauEstimate {
    double gamma_bar = kInfiniteGamma; // +inf when no plateau below gamma_max
    bool found = false;
    double min_slope = 0.0;
    double lambda_at = 0.0;            // lambda(gamma_bar), or lambda(gamma_max) when not found
    double dirichlet_lambda = 0.0;
    double relative_gap = 0.0;         // (lambda_D - lambda_at) / lambda_D
};

/// Estimate the threshold gamma_bar beyond which lambda(gamma) is constant.
///
/// The derivative lambda'(gamma) = b[u_gamma] vanishes identically on the
/// plateau; discretely it collapses over a short gamma range instead. The
/// threshold is located at the steepest log-log descent of lambda', first on
/// a geometric grid, then by golden-section refinement.
inline PlateauEstimate find_plateau(const RadialProblem& problem, PlateauOptions opts = {}) {
    if (!(opts.tol > 0.0)) throw InvalidArgument("plateau tolerance must be positive");
    if (!(opts.gamma_min > 0.0) || !(opts.gamma_max > opts.gamma_min)) {
        throw InvalidArgument("plateau search needs 0 < gamma_min < gamma_max");
    }
    if (opts.points_per_decade < 2) throw InvalidArgument("plateau search needs >= 2 points per decade");

    const SolveOptions fast{kDefaultEigenTol, false};
    auto log_derivative = [&](double g) { return std::log(problem.robin(g, fast).lambda_prime); };

    PlateauEstimate est;
    est.dirichlet_lambda = problem.dirichlet().lambda;

    const double s_lo = std::log(opts.gamma_min);
    const double s_hi = std::log(opts.gamma_max);
    const int count = std::max(2, static_cast<int>(std::ceil((s_hi - s_lo) / std::log(10.0) * opts.points_per_decade)));
    std::vector<double> s(count + 1), ld(count + 1);
    for (int j = 0; j <= count; ++j) {
        s[j] = s_lo + (s_hi - s_lo) * j / count;
        ld[j] = log_derivative(std::exp(s[j]));
    }
    int jmin = 0;
    est.min_slope = std::numeric_limits<double>::infinity();
    for (int j = 0; j < count; ++j) {
        const double slope = (ld[j + 1] - ld[j]) / (s[j + 1] - s[j]);
        if (slope < est.min_slope) {
            est.min_slope = slope;
            jmin = j;
        }
    }

    if (!(est.min_slope < opts.slope_threshold)) {
        est.lambda_at = problem.robin(opts.gamma_max, fast).lambda;
        est.relative_gap = (est.dirichlet_lambda - est.lambda_at) / est.dirichlet_lambda;
        return est;
    }

    // Golden-section search for the most negative central-difference slope.
    const double delta = 0.01;
    auto slope_at = [&](double x) { return (log_derivative(std::exp(x + delta)) - log_derivative(std::exp(x - delta))) / (2.0 * delta); };
    double a = s[std::max(jmin - 1, 0)];
    double b = s[std::min(jmin + 2, count)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = slope_at(c), fd = slope_at(d);
    while (b - a > opts.tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = slope_at(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = slope_at(d);
        }
    }
    est.found = true;
    est.min_slope = std::min(est.min_slope, std::min(fc, fd));
    est.gamma_bar = std::exp(0.5 * (a + b));
    est.lambda_at = problem.robin(est.gamma_bar, fast).lambda;
    est.relative_gap = (est.dirichlet_lambda - est.lambda_at) / est.dirichlet_lambda;
    return est;
}

inline PlateauEstimate find_plateau(const RadialWeight& f, Dimension dim, const GradedMesh& mesh,
                                    PlateauOptions opts = {}) {
    return find_plateau(RadialProblem(f, dim, mesh), opts);
}

// ---------------------------------------------------------------------------
// trace, equivalence and local-threshold constants

struct TraceConstant {
    double eps = 0.0;
    double value = 0.0;               // C(eps)
    std::vector<double> maximizer;    // m_f = 1
    double equality_defect = 0.0;     // |b - eps k - C m_f| / (C m_f) at the maximizer
};

/// Smallest C with b[u] <= eps k[u] + C m_f[u] on the discrete space: the
/// largest eigenvalue of (B - eps K) x = C M_f x.
inline TraceConstant trace_constant(const RadialWeight& f, Dimension dim, double eps, const GradedMesh& mesh,
                                    double tol = kDefaultEigenTol) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("trace constant needs eps > 0");
    const OperatorTriple op = assemble(mesh, dim, f);
    const SymTridiag A = SymTridiag::combine(1.0, op.boundary_matrix(), -eps, op.K);
    EigenPair p = extremal_eigenpair(A, op.Mf, Which::Largest, tol);
    TraceConstant tc;
    tc.eps = eps;
    tc.value = p.value;
    const double s = 1.0 / std::sqrt(op.mf_form(p.vector));
    for (auto& v : p.vector) v *= s;
    tc.maximizer = std::move(p.vector);
    const double m = op.mf_form(tc.maximizer);
    const double lhs = op.b_form(tc.maximizer) - eps * op.k_form(tc.maximizer);
    tc.equality_defect = std::abs(lhs - tc.value * m) / std::abs(tc.value * m);
    return tc;
}

struct EquivalenceConstant {
    double value = 0.0;              // c = sup (k + m_1) / (k + m_f)
    double ratio_at_maximizer = 0.0;
};

/// Largest eigenvalue of (K + M_1) x = c (K + M_f) x.
inline EquivalenceConstant equivalence_constant(const RadialWeight& f, Dimension dim, const GradedMesh& mesh,
                                                double tol = kDefaultEigenTol) {
    const OperatorTriple op = assemble(mesh, dim, f);
    const SymTridiag A = SymTridiag::combine(1.0, op.K, 1.0, op.M1);
    const SymTridiag M = SymTridiag::combine(1.0, op.K, 1.0, op.Mf);
    const EigenPair p = extremal_eigenpair(A, M, Which::Largest, tol);
    EquivalenceConstant ec;
    ec.value = p.value;
    const double k = op.k_form(p.vector);
    ec.ratio_at_maximizer = (k + op.m1_form(p.vector)) / (k + op.mf_form(p.vector));
    return ec;
}

/// First weighted Dirichlet eigenvalue of the centered ball B_r, computed on
/// the reference mesh scaled to [0, r].
inline double local_threshold(const RadialWeight& f, Dimension dim, double r, std::size_t n = kDefaultElements,
                              double q = kDefaultGrading, double domain_radius = 1.0) {
    if (!(r > 0.0) || r > domain_radius) throw InvalidArgument("local threshold radius must lie in (0, R]");
    return dirichlet_eigenvalue(f, dim, build_mesh(n, q, r)).lambda;
}

} // namespace robinrad
