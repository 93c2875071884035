#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "robinrad/error.hpp"

namespace robinrad {

/// Space dimension N >= 3.
class Dimension {
public:
    explicit Dimension(int n) : n_(n) {
        if (n < 3) {
            throw InvalidArgument("dimension must satisfy N >= 3, got " + std::to_string(n));
        }
    }
    int value() const noexcept { return n_; }
    double as_double() const noexcept { return static_cast<double>(n_); }
    /// (N-2)^2/4, the Hardy constant of the ball.
    double hardy_constant() const noexcept {
        const double a = 0.5 * (n_ - 2);
        return a * a;
    }
    friend bool operator==(Dimension, Dimension) = default;

private:
    int n_;
};

/// One monomial c * r^p of a radial weight.
struct WeightTerm {
    double coefficient;
    double exponent;
    friend bool operator==(const WeightTerm&, const WeightTerm&) = default;
};

/// Exponent of the Hardy-critical term r^{-2}.
inline constexpr double kHardyExponent = -2.0;

enum class Singularity {
    Regular,            // every exponent >= 0, f bounded at the origin
    IntegrableSingular, // some exponent in (-2, 0): unbounded but in L^{N/2}
    HardyCritical,      // an r^{-2} term is present
};

inline const char* to_string(Singularity s) {
    switch (s) {
    case Singularity::Regular: return "regular";
    case Singularity::IntegrableSingular: return "integrable-singular";
    case Singularity::HardyCritical: return "hardy-critical";
    }
    return "unknown";
}

struct ValidationReport {
    bool admissible = false;
    std::string reason;                       // empty when admissible
    Singularity singularity = Singularity::Regular;
    double hardy_coefficient = 0.0;           // sum of coefficients of r^{-2} terms
    double min_exponent = 0.0;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Classify a raw term list. Never throws: inadmissible lists come back with
/// `admissible == false` and a reason.
inline ValidationReport validate_weight(std::span<const WeightTerm> terms, Dimension dim) {
    ValidationReport rep;
    if (terms.empty()) {
        rep.reason = "weight has no terms";
        return rep;
    }
    bool any_positive = false;
    rep.min_exponent = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) {
            rep.reason = "non-finite coefficient or exponent";
            return rep;
        }
        if (t.coefficient < 0.0) {
            rep.reason = "negative coefficient " + std::to_string(t.coefficient);
            return rep;
        }
        if (t.exponent < kHardyExponent) {
            rep.reason = "exponent " + std::to_string(t.exponent) +
                         " < -2 is outside the weak-L^{N/2} range";
            return rep;
        }
        if (t.coefficient > 0.0) {
            any_positive = true;
            rep.min_exponent = std::min(rep.min_exponent, t.exponent);
            if (t.exponent == kHardyExponent) rep.hardy_coefficient += t.coefficient;
        }
    }
    if (!any_positive) {
        rep.reason = "all coefficients are zero";
        rep.min_exponent = 0.0;
        return rep;
    }
    // p >= -2 and N >= 3 give p + N - 1 > -1, so the radial mass integral is finite.
    if (rep.min_exponent + dim.value() - 1 <= -1.0) {
        rep.reason = "weight not integrable against r^{N-1}";
        return rep;
    }
    rep.admissible = true;
    if (rep.hardy_coefficient > 0.0) {
        rep.singularity = Singularity::HardyCritical;
    } else if (rep.min_exponent < 0.0) {
        rep.singularity = Singularity::IntegrableSingular;
    } else {
        rep.singularity = Singularity::Regular;
    }
    return rep;
}

/// f(r) = sum_i c_i r^{p_i} with c_i >= 0, p_i >= -2 and at least one c_i > 0.
/// Construction validates; instances are always admissible.
class RadialWeight {
public:
    explicit RadialWeight(std::vector<WeightTerm> terms) : terms_(std::move(terms)) {
        // Admissibility does not depend on N beyond N >= 3.
        const auto rep = validate_weight(terms_, Dimension(3));
        if (!rep.admissible) throw InvalidArgument("inadmissible weight: " + rep.reason);
        // Zero-coefficient terms carry no information and would only cost assembly time.
        std::erase_if(terms_, [](const WeightTerm& t) { return t.coefficient == 0.0; });
        hardy_coefficient_ = rep.hardy_coefficient;
        singularity_ = rep.singularity;
    }

    static RadialWeight constant(double c) { return RadialWeight({{c, 0.0}}); }
    static RadialWeight hardy(double c = 1.0) { return RadialWeight({{c, kHardyExponent}}); }
    static RadialWeight power(double c, double p) { return RadialWeight({{c, p}}); }

    std::span<const WeightTerm> terms() const noexcept { return terms_; }
    double hardy_coefficient() const noexcept { return hardy_coefficient_; }
    Singularity singularity() const noexcept { return singularity_; }

    double operator()(double r) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.coefficient * std::pow(r, t.exponent);
        return s;
    }

    /// Same weight multiplied by a positive constant.
    RadialWeight scaled(double factor) const {
        if (!(factor > 0.0)) throw InvalidArgument("weight scale factor must be positive");
        auto terms = terms_;
        for (auto& t : terms) t.coefficient *= factor;
        return RadialWeight(std::move(terms));
    }

    friend bool operator==(const RadialWeight& a, const RadialWeight& b) { return a.terms_ == b.terms_; }

private:
    std::vector<WeightTerm> terms_;
    double hardy_coefficient_ = 0.0;
    Singularity singularity_ = Singularity::Regular;
};

inline ValidationReport validate_weight(const RadialWeight& w, Dimension dim) {
    return validate_weight(w.terms(), dim);
}

/// Ball B_R(0).
class BallDomain {
public:
    explicit BallDomain(double radius = 1.0) : radius_(radius) {
        if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be positive");
    }
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

/// Parameters of the nonlinear Robin problem. lambda is kept unscaled; the
/// solver forms sigma0 * lambda itself.
struct RobinParams {
    double gamma = 0.0;
    double beta = 1.0;
    double lambda = 0.0;
    double sigma0 = 1.0;

    void validate() const {
        if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
        if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw InvalidArgument("sigma0 must be positive");
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be nonnegative");
        if (std::isnan(gamma)) throw InvalidArgument("gamma must not be NaN");
    }
};

namespace detail {

inline double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    // from_chars rejects a leading '+', which users do write.
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

inline bool starts_term(std::string_view s) {
    return s.starts_with("const:") || s.starts_with("power:") || s == "hardy" || s.starts_with("hardy+");
}

inline WeightTerm parse_term(std::string_view s) {
    if (s == "hardy") return {1.0, kHardyExponent};
    if (s.starts_with("const:")) return {parse_number(s.substr(6), "coefficient"), 0.0};
    if (s.starts_with("power:")) {
        const auto rest = s.substr(6);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            throw InvalidArgument("power term needs power:<c>:<p>, got '" + std::string(s) + "'");
        }
        return {parse_number(rest.substr(0, colon), "coefficient"),
                parse_number(rest.substr(colon + 1), "exponent")};
    }
    throw InvalidArgument("unknown weight term '" + std::string(s) + "'");
}

} // namespace detail

/// Parse the weight mini-language: `const:<c>`, `hardy`, `power:<c>:<p>`,
/// or `sum:<term>+<term>+...`.
inline RadialWeight parse_weight(std::string_view text) {
    if (!text.starts_with("sum:")) return RadialWeight({detail::parse_term(text)});
    std::string_view rest = text.substr(4);
    std::vector<WeightTerm> terms;
    // '+' also occurs inside numbers ("1e+3"), so only split where a term keyword follows.
    std::size_t start = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == '+' && detail::starts_term(rest.substr(i + 1))) {
            terms.push_back(detail::parse_term(rest.substr(start, i - start)));
            start = i + 1;
        }
    }
    terms.push_back(detail::parse_term(rest.substr(start)));
    return RadialWeight(std::move(terms));
}

/// Canonical mini-language string for a weight.
inline std::string format_weight(const RadialWeight& w) {
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string out;
    const auto terms = w.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += '+';
        out += "power:" + num(terms[i].coefficient) + ":" + num(terms[i].exponent);
    }
    return terms.size() == 1 ? out : "sum:" + out;
}

} // namespace robinrad
