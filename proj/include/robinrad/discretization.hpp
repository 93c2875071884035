#pragma once

// Graded radial meshes and exact assembly of the reduced quadratic forms
//   k[u]   = int_0^R u'^2 r^{N-1} dr
//   m_f[u] = int_0^R f u^2 r^{N-1} dr
//   m_1[u] = int_0^R u^2 r^{N-1} dr
//   b[u]   = R^{N-1} u(R)^2
// over continuous piecewise-linear elements. All forms are per unit solid
// angle; the sphere area cancels from every Rayleigh quotient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "robinrad/domain.hpp"
#include "robinrad/error.hpp"
#include "robinrad/tridiag.hpp"

namespace robinrad {

inline constexpr std::size_t kDefaultElements = 4096;
inline constexpr double kDefaultGrading = 2.0;

/// Nodes 0 = r_0 < r_1 < ... < r_n = R.
class GradedMesh {
public:
    /// Custom node list (grading reported as 0).
    static GradedMesh from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 3) throw InvalidArgument("mesh needs at least 2 elements");
        if (nodes.front() != 0.0) throw InvalidArgument("mesh must start at r = 0");
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i])) {
                throw InvalidArgument("mesh nodes must be finite and strictly increasing");
            }
        }
        return GradedMesh(std::move(nodes), 0.0);
    }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::size_t elements() const noexcept { return nodes_.size() - 1; }
    double grading() const noexcept { return grading_; }
    double radius() const noexcept { return nodes_.back(); }
    double operator[](std::size_t i) const { return nodes_[i]; }

    friend GradedMesh build_mesh(std::size_t n, double q, double radius);

private:
    GradedMesh(std::vector<double> nodes, double q) : nodes_(std::move(nodes)), grading_(q) {}
    std::vector<double> nodes_;
    double grading_;
};

/// r_i = R (i/n)^q.
inline GradedMesh build_mesh(std::size_t n, double q = kDefaultGrading, double radius = 1.0) {
    if (n < 2) throw InvalidArgument("mesh needs n >= 2 elements");
    if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("grading exponent must satisfy q >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("mesh radius must be positive");
    std::vector<double> nodes(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        nodes[i] = radius * std::pow(static_cast<double>(i) / static_cast<double>(n), q);
    }
    nodes[n] = radius;
    for (std::size_t i = 1; i <= n; ++i) {
        if (!(nodes[i] > nodes[i - 1])) throw InvalidArgument("mesh grading underflows; reduce n or q");
    }
    return GradedMesh(std::move(nodes), q);
}

/// Which basis product is integrated on an element [a, b]. With
/// L = (b - r)/h and R = (r - a)/h the element mass matrix is
/// [[LL, LR], [LR, RR]].
enum class BasisProduct { One, LL, LR, RR };

namespace detail {

/// int_a^b r^q dr
inline double monomial_moment(double a, double b, double q) {
    const double q1 = q + 1.0;
    const double L = std::log(b / a);
    if (q1 == 0.0) return L;
    return std::pow(a, q1) * std::expm1(q1 * L) / q1;
}

/// int_0^1 t^i (1-t)^k dt for k <= 2, real i > -1.
inline double beta_poly(double i, int k) {
    switch (k) {
    case 0: return 1.0 / (i + 1.0);
    case 1: return 1.0 / ((i + 1.0) * (i + 2.0));
    default: return 2.0 / ((i + 1.0) * (i + 2.0) * (i + 3.0));
    }
}

inline void product_powers(BasisProduct p, int& i, int& k) {
    switch (p) {
    case BasisProduct::One: i = 0; k = 0; break;
    case BasisProduct::LL: i = 0; k = 2; break;
    case BasisProduct::LR: i = 1; k = 1; break;
    case BasisProduct::RR: i = 2; k = 0; break;
    }
}

} // namespace detail

/// Exact int_a^b phi(r) r^s dr for a basis product phi on the element [a, b].
///
/// a = 0 uses the Beta-function closed form. Short elements (h/a <= 1/2) use
/// the binomial series of (1 + (h/a) t)^s, which avoids the cancellation the
/// moment formula suffers when b/a is close to 1. Long elements use moments.
inline double element_integral(double a, double b, double s, BasisProduct product) {
    const double h = b - a;
    int i = 0, k = 0;
    detail::product_powers(product, i, k);
    if (a == 0.0) {
        if (!(s + i > -1.0)) throw InvalidArgument("non-integrable element integral at r = 0");
        return std::pow(h, s + 1.0) * detail::beta_poly(s + i, k);
    }
    const double x = h / a;
    if (x <= 0.5) {
        double sum = 0.0;
        double binom = 1.0;
        double xm = 1.0;
        for (int m = 0; m < 400; ++m) {
            const double term = binom * xm * detail::beta_poly(static_cast<double>(i + m), k);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum) && m > 2) break;
            binom *= (s - m) / (m + 1.0);
            xm *= x;
            if (binom == 0.0) break;
        }
        return std::pow(a, s) * h * sum;
    }
    const double m0 = detail::monomial_moment(a, b, s);
    const double m1 = detail::monomial_moment(a, b, s + 1.0);
    const double m2 = detail::monomial_moment(a, b, s + 2.0);
    const double h2 = h * h;
    switch (product) {
    case BasisProduct::One: return m0;
    case BasisProduct::LL: return (b * b * m0 - 2.0 * b * m1 + m2) / h2;
    case BasisProduct::RR: return (a * a * m0 - 2.0 * a * m1 + m2) / h2;
    case BasisProduct::LR: return (-a * b * m0 + (a + b) * m1 - m2) / h2;
    }
    return 0.0;
}

/// Stiffness, weighted mass and plain mass forms plus the boundary form
/// location. The boundary form touches only (boundary_index, boundary_index).
struct OperatorTriple {
    GradedMesh mesh;
    int dimension;
    SymTridiag K;
    SymTridiag Mf;
    SymTridiag M1;
    /// int_{element} r^{N-1} dr / h^2, so k[u] = sum_e ke (u_{e+1} - u_e)^2.
    std::vector<double> element_stiffness;
    std::size_t boundary_index;
    double boundary_value; // R^{N-1}

    std::size_t size() const noexcept { return K.size(); }

    /// K + gamma B
    SymTridiag robin_matrix(double gamma) const {
        SymTridiag A = K;
        A.diag[boundary_index] += gamma * boundary_value;
        return A;
    }

    /// B as a tridiagonal matrix.
    SymTridiag boundary_matrix() const {
        SymTridiag B = SymTridiag::zeros(size());
        B.diag[boundary_index] = boundary_value;
        return B;
    }

    double k_form(std::span<const double> x) const {
        double s = 0.0;
        for (std::size_t e = 0; e < element_stiffness.size(); ++e) {
            const double d = x[e + 1] - x[e];
            s += element_stiffness[e] * d * d;
        }
        return s;
    }
    double mf_form(std::span<const double> x) const { return Mf.quadratic_form(x); }
    double m1_form(std::span<const double> x) const { return M1.quadratic_form(x); }
    double b_form(std::span<const double> x) const {
        return boundary_value * x[boundary_index] * x[boundary_index];
    }
};

namespace detail {

inline void add_mass(SymTridiag& M, const GradedMesh& mesh, double coefficient, double s) {
    const auto r = mesh.nodes();
    for (std::size_t e = 0; e + 1 < r.size(); ++e) {
        const double a = r[e], b = r[e + 1];
        M.diag[e] += coefficient * element_integral(a, b, s, BasisProduct::LL);
        M.offdiag[e] += coefficient * element_integral(a, b, s, BasisProduct::LR);
        M.diag[e + 1] += coefficient * element_integral(a, b, s, BasisProduct::RR);
    }
}

} // namespace detail

/// Assemble K, M_f, M_1 with exact monomial moments on every element.
inline OperatorTriple assemble(const GradedMesh& mesh, Dimension dim, const RadialWeight& f) {
    const auto r = mesh.nodes();
    const std::size_t m = r.size();
    const double nm1 = dim.as_double() - 1.0;

    OperatorTriple op{mesh, dim.value(), SymTridiag::zeros(m), SymTridiag::zeros(m), SymTridiag::zeros(m),
                      std::vector<double>(m - 1), m - 1, std::pow(mesh.radius(), nm1)};

    for (std::size_t e = 0; e + 1 < m; ++e) {
        const double a = r[e], b = r[e + 1], h = b - a;
        const double ke = element_integral(a, b, nm1, BasisProduct::One) / (h * h);
        op.element_stiffness[e] = ke;
        op.K.diag[e] += ke;
        op.K.diag[e + 1] += ke;
        op.K.offdiag[e] -= ke;
    }
    for (const auto& t : f.terms()) {
        const double s = t.exponent + nm1;
        if (!(s > -1.0)) throw InvalidArgument("weight term not integrable against r^{N-1}");
        detail::add_mass(op.Mf, mesh, t.coefficient, s);
    }
    detail::add_mass(op.M1, mesh, 1.0, nm1);
    return op;
}

/// Values of the piecewise-linear function with nodal values `x` on `mesh`.
inline double interpolate(const GradedMesh& mesh, std::span<const double> x, double r) {
    const auto nodes = mesh.nodes();
    if (r <= nodes.front()) return x.front();
    if (r >= nodes.back()) return x.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    const std::size_t e = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double t = (r - nodes[e]) / (nodes[e + 1] - nodes[e]);
    return (1.0 - t) * x[e] + t * x[e + 1];
}

} // namespace robinrad
