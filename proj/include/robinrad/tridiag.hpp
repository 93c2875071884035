#pragma once

// Extremal eigenpairs of symmetric tridiagonal pencils A x = lambda M x with
// M positive definite. Eigenvalues are located by bisection on the Sylvester
// inertia of A - t M, eigenvectors by shifted inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "robinrad/error.hpp"

namespace robinrad {

/// Symmetric tridiagonal matrix stored as diagonal (m) and off-diagonal (m-1).
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;

    SymTridiag() = default;
    SymTridiag(std::vector<double> d, std::vector<double> e) : diag(std::move(d)), offdiag(std::move(e)) {
        validate();
    }

    static SymTridiag diagonal(std::vector<double> d) {
        std::vector<double> e(d.empty() ? 0 : d.size() - 1, 0.0);
        return SymTridiag(std::move(d), std::move(e));
    }
    static SymTridiag zeros(std::size_t m) { return diagonal(std::vector<double>(m, 0.0)); }

    std::size_t size() const noexcept { return diag.size(); }

    void validate() const {
        if (diag.empty()) throw InvalidArgument("empty tridiagonal matrix");
        if (offdiag.size() + 1 != diag.size()) throw InvalidArgument("off-diagonal length must be m-1");
        for (double v : diag)
            if (!std::isfinite(v)) throw InvalidArgument("non-finite diagonal entry");
        for (double v : offdiag)
            if (!std::isfinite(v)) throw InvalidArgument("non-finite off-diagonal entry");
    }

    /// y = A x
    std::vector<double> apply(std::span<const double> x) const {
        const std::size_t m = size();
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += offdiag[i - 1] * x[i - 1];
            if (i + 1 < m) s += offdiag[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    /// x^T A x
    double quadratic_form(std::span<const double> x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += diag[i] * x[i] * x[i];
        for (std::size_t i = 0; i + 1 < size(); ++i) s += 2.0 * offdiag[i] * x[i] * x[i + 1];
        return s;
    }

    /// Max absolute row sum.
    double norm_inf() const {
        double n = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            double s = std::abs(diag[i]);
            if (i > 0) s += std::abs(offdiag[i - 1]);
            if (i + 1 < size()) s += std::abs(offdiag[i]);
            n = std::max(n, s);
        }
        return n;
    }

    /// a*A + b*B
    static SymTridiag combine(double a, const SymTridiag& A, double b, const SymTridiag& B) {
        if (A.size() != B.size()) throw InvalidArgument("size mismatch in tridiagonal combination");
        SymTridiag C;
        C.diag.resize(A.size());
        C.offdiag.resize(A.offdiag.size());
        for (std::size_t i = 0; i < A.size(); ++i) C.diag[i] = a * A.diag[i] + b * B.diag[i];
        for (std::size_t i = 0; i < A.offdiag.size(); ++i) C.offdiag[i] = a * A.offdiag[i] + b * B.offdiag[i];
        return C;
    }

    /// Leading principal submatrix of order m.
    SymTridiag leading(std::size_t m) const {
        if (m == 0 || m > size()) throw InvalidArgument("invalid leading block size");
        return SymTridiag(std::vector<double>(diag.begin(), diag.begin() + m),
                          std::vector<double>(offdiag.begin(), offdiag.begin() + (m - 1)));
    }

    friend bool operator==(const SymTridiag&, const SymTridiag&) = default;
};

enum class Which { Smallest, Largest };

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    /// Normwise backward error ||Ax - lambda Mx|| / ((||A|| + |lambda| ||M||) ||x||).
    double residual = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

inline constexpr double kDefaultEigenTol = 1e-12;

namespace detail {

/// Negative pivots of the LDL^T factorization of A - tM.
/// Throws PivotBreakdown when a pivot is exactly zero.
inline std::size_t factor_count(const SymTridiag& A, const SymTridiag& M, double t) {
    const std::size_t m = A.size();
    if (M.size() != m) throw InvalidArgument("pencil size mismatch");
    std::size_t count = 0;
    double d = A.diag[0] - t * M.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (d == 0.0) throw PivotBreakdown(t, i);
        if (d < 0.0) ++count;
        if (i + 1 == m) break;
        const double e = A.offdiag[i] - t * M.offdiag[i];
        d = (A.diag[i + 1] - t * M.diag[i + 1]) - e * (e / d);
    }
    return count;
}

} // namespace detail

/// Number of eigenvalues of the pencil (A, M) strictly below t. An exactly
/// zero pivot moves t down by a few ulps and recounts.
inline std::size_t inertia_below(const SymTridiag& A, const SymTridiag& M, double t) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        try {
            return detail::factor_count(A, M, t);
        } catch (const PivotBreakdown&) {
            const double step = std::max(std::abs(t), 1.0) * std::numeric_limits<double>::epsilon();
            t -= step * (1 << std::min(attempt, 20));
        }
    }
    throw NonConvergence("persistent zero pivots in inertia count", t, t);
}

namespace detail {

inline std::size_t count_below(const SymTridiag& A, const SymTridiag& M, double t) { return inertia_below(A, M, t); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// LU with partial pivoting of a general tridiagonal matrix, then solve
/// in place. Exactly singular pivots are replaced by a tiny value, which
/// is what inverse iteration wants.
inline void solve_shifted(std::vector<double> dl, std::vector<double> d, std::vector<double> du,
                          std::vector<double>& b) {
    const std::size_t m = d.size();
    if (m == 1) {
        b[0] /= (d[0] != 0.0 ? d[0] : std::numeric_limits<double>::min());
        return;
    }
    double scale = 0.0;
    for (double v : d) scale = std::max(scale, std::abs(v));
    for (double v : du) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, std::numeric_limits<double>::min()) * std::numeric_limits<double>::epsilon();

    std::vector<double> du2(m > 2 ? m - 2 : 0, 0.0);
    std::vector<char> swapped(m - 1, 0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < m) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    if (d[m - 1] == 0.0) d[m - 1] = tiny;

    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (!swapped[i]) {
            b[i + 1] -= dl[i] * b[i];
        } else {
            const double temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - dl[i] * b[i];
        }
    }
    b[m - 1] /= d[m - 1];
    b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
    for (std::size_t k = m - 2; k-- > 0;) {
        b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
    }
}

struct Bracket {
    double lo;
    double hi;
};

/// Interval [lo, hi] with count(lo) < k <= count(hi), i.e. containing the
/// k-th eigenvalue (1-based). Seeded from Gershgorin-type row bounds scaled
/// by M's diagonal, then widened geometrically until the counts agree.
inline Bracket initial_bracket(const SymTridiag& A, const SymTridiag& M, std::size_t k) {
    const std::size_t m = A.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        double ra = 0.0, rm = 0.0;
        if (i > 0) { ra += std::abs(A.offdiag[i - 1]); rm += std::abs(M.offdiag[i - 1]); }
        if (i + 1 < m) { ra += std::abs(A.offdiag[i]); rm += std::abs(M.offdiag[i]); }
        const double mlo = std::max(M.diag[i] - rm, 0.5 * M.diag[i]);
        const double mhi = M.diag[i] + rm;
        const double alo = A.diag[i] - ra;
        const double ahi = A.diag[i] + ra;
        lo = std::min(lo, alo < 0.0 ? alo / mlo : alo / mhi);
        hi = std::max(hi, ahi > 0.0 ? ahi / mlo : ahi / mhi);
    }
    if (k == 1) {
        // The Rayleigh quotient of any vector bounds the smallest eigenvalue above.
        const std::vector<double> ones(m, 1.0);
        const double rq = A.quadratic_form(ones) / M.quadratic_form(ones);
        hi = std::min(hi, rq + 1e-8 * (1.0 + std::abs(rq)));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonConvergence("non-finite bracket seed", lo, hi);
    if (hi < lo) std::swap(lo, hi);

    double width = std::max(hi - lo, 1.0 + std::abs(lo));
    for (int it = 0; count_below(A, M, lo) >= k; ++it) {
        if (it > 200) throw NonConvergence("cannot bracket eigenvalue from below", lo, hi);
        lo -= width;
        width *= 2.0;
    }
    width = std::max(hi - lo, 1.0 + std::abs(hi));
    for (int it = 0; count_below(A, M, hi) < k; ++it) {
        if (it > 200) throw NonConvergence("cannot bracket eigenvalue from above", lo, hi);
        hi += width;
        width *= 2.0;
    }
    return {lo, hi};
}

/// Bisection on the inertia count until the bracket width is at most
/// tol * (1 + |lambda|).
inline Bracket bisect(const SymTridiag& A, const SymTridiag& M, std::size_t k, double tol) {
    auto [lo, hi] = initial_bracket(A, M, k);
    for (int it = 0; it < 400; ++it) {
        if (hi - lo <= tol * (1.0 + std::max(std::abs(lo), std::abs(hi)))) return {lo, hi};
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return {lo, hi}; // adjacent doubles
        if (count_below(A, M, mid) >= k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    throw NonConvergence("bisection did not reach tolerance", lo, hi);
}

inline double backward_error(const SymTridiag& A, const SymTridiag& M, std::span<const double> x, double lambda) {
    const auto ax = A.apply(x);
    const auto mx = M.apply(x);
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ax[i] - lambda * mx[i];
        r2 += r * r;
    }
    const double scale = (A.norm_inf() + std::abs(lambda) * M.norm_inf()) * norm2(x);
    return scale > 0.0 ? std::sqrt(r2) / scale : std::sqrt(r2);
}

/// D X D with D = diag(d).
inline SymTridiag congruence(const SymTridiag& X, std::span<const double> d) {
    SymTridiag Y = X;
    for (std::size_t i = 0; i < Y.diag.size(); ++i) Y.diag[i] *= d[i] * d[i];
    for (std::size_t i = 0; i < Y.offdiag.size(); ++i) Y.offdiag[i] *= d[i] * d[i + 1];
    return Y;
}

/// Rows near r = 0 carry entries many orders of magnitude below the rest,
/// which hides errors there from any unscaled residual. Scaling by
/// diag(M)^{-1/2} puts every row on the same footing.
inline std::vector<double> equilibration(const SymTridiag& M) {
    std::vector<double> d(M.size(), 1.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (M.diag[i] > 0.0) d[i] = 1.0 / std::sqrt(M.diag[i]);
    }
    return d;
}

/// Null vector of the tridiagonal T = (d, e) at a shift that is an eigenvalue
/// to working precision, from the twisted factorization at the index where
/// the twist element is smallest. Each component is a product of local
/// ratios, so tiny components keep their relative accuracy.
inline std::vector<double> twisted_vector(std::span<const double> d, std::span<const double> e) {
    const std::size_t m = d.size();
    const double tiny = std::numeric_limits<double>::min();
    auto nonzero = [&](double v) { return v != 0.0 ? v : tiny; };
    std::vector<double> top(m), bot(m);
    top[0] = nonzero(d[0]);
    for (std::size_t i = 1; i < m; ++i) top[i] = nonzero(d[i] - e[i - 1] * (e[i - 1] / top[i - 1]));
    bot[m - 1] = nonzero(d[m - 1]);
    for (std::size_t i = m - 1; i-- > 0;) bot[i] = nonzero(d[i] - e[i] * (e[i] / bot[i + 1]));

    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double twist = std::abs(top[i] + bot[i] - d[i]);
        if (twist < best) {
            best = twist;
            k = i;
        }
    }
    std::vector<double> x(m, 0.0);
    x[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) x[i] = -e[i] * x[i + 1] / top[i];
    for (std::size_t i = k + 1; i < m; ++i) x[i] = -e[i - 1] * x[i - 1] / bot[i];
    const double nrm = norm2(x);
    for (auto& v : x) v /= nrm;
    return x;
}

inline EigenPair smallest_pair_scaled(const SymTridiag& A, const SymTridiag& M, double tol) {
    const Bracket br = bisect(A, M, 1, tol);
    const double shift = 0.5 * (br.lo + br.hi);
    const std::size_t m = A.size();

    std::vector<double> dl(m - 1), d(m), du(m - 1);
    for (std::size_t i = 0; i < m; ++i) d[i] = A.diag[i] - shift * M.diag[i];
    for (std::size_t i = 0; i + 1 < m; ++i) dl[i] = du[i] = A.offdiag[i] - shift * M.offdiag[i];

    EigenPair out;
    out.bracket_lo = br.lo;
    out.bracket_hi = br.hi;
    out.residual = std::numeric_limits<double>::infinity();
    // The Rayleigh quotient is second-order accurate; keep it only if it is
    // consistent with the inertia bracket.
    const double slack = 2.0 * (br.hi - br.lo) + 4.0 * tol * (1.0 + std::abs(shift));
    auto consider = [&](std::vector<double> y) {
        const double rq = A.quadratic_form(y) / M.quadratic_form(y);
        const double value = (rq >= br.lo - slack && rq <= br.hi + slack) ? rq : shift;
        const double res = backward_error(A, M, y, value);
        if (res < out.residual) {
            out.value = value;
            out.vector = std::move(y);
            out.residual = res;
        }
        return res;
    };

    std::vector<double> x = twisted_vector(d, du);
    if (!(consider(x) <= tol)) {
        // Inverse iteration as a fallback; it controls the error in norm only.
        for (int it = 0; it < 8; ++it) {
            auto y = M.apply(x);
            solve_shifted(dl, d, du, y);
            const double nrm = norm2(y);
            if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
            for (auto& v : y) v /= nrm;
            x = y;
            if (consider(std::move(y)) <= tol) break;
        }
    }
    if (out.vector.empty() || !(out.residual <= tol)) {
        throw NonConvergence("eigenvector did not reach the residual tolerance", br.lo, br.hi);
    }
    return out;
}

inline EigenPair smallest_pair(const SymTridiag& A, const SymTridiag& M, double tol) {
    const std::vector<double> d = equilibration(M);
    EigenPair p = smallest_pair_scaled(congruence(A, d), congruence(M, d), tol);
    for (std::size_t i = 0; i < d.size(); ++i) p.vector[i] *= d[i];
    auto it = std::max_element(p.vector.begin(), p.vector.end(),
                               [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*it < 0.0)
        for (auto& v : p.vector) v = -v;
    return p;
}

} // namespace detail

/// Smallest or largest eigenpair of A x = lambda M x. For Largest the pencil
/// is negated internally.
inline EigenPair extremal_eigenpair(const SymTridiag& A, const SymTridiag& M, Which which,
                                    double tol = kDefaultEigenTol) {
    A.validate();
    M.validate();
    if (A.size() != M.size()) throw InvalidArgument("pencil size mismatch");
    if (!(tol > 0.0)) throw InvalidArgument("eigen tolerance must be positive");
    if (which == Which::Smallest) return detail::smallest_pair(A, M, tol);

    const SymTridiag negA = SymTridiag::combine(-1.0, A, 0.0, A);
    EigenPair p = detail::smallest_pair(negA, M, tol);
    p.value = -p.value;
    const double lo = -p.bracket_hi;
    p.bracket_hi = -p.bracket_lo;
    p.bracket_lo = lo;
    return p;
}

/// k-th smallest eigenvalue (1-based) of the pencil.
inline double kth_eigenvalue(const SymTridiag& A, const SymTridiag& M, std::size_t k,
                             double tol = kDefaultEigenTol) {
    A.validate();
    M.validate();
    if (A.size() != M.size()) throw InvalidArgument("pencil size mismatch");
    if (k < 1 || k > A.size()) {
        throw InvalidArgument("eigenvalue index " + std::to_string(k) + " out of range 1.." +
                              std::to_string(A.size()));
    }
    if (!(tol > 0.0)) throw InvalidArgument("eigen tolerance must be positive");
    const auto br = detail::bisect(A, M, k, tol);
    return 0.5 * (br.lo + br.hi);
}

} // namespace robinrad
