#pragma once

// JSON and CSV emission for eigen results, sweeps, meshes and BVP profiles.
// Doubles are written in shortest round-trip form so files re-parse to the
// exact same bits.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "robinrad/bvp.hpp"
#include "robinrad/discretization.hpp"
#include "robinrad/spectral.hpp"

namespace robinrad::io {

using json = nlohmann::json;

/// Shortest decimal string that reads back as `v`; "inf", "-inf", "nan"
/// for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw InvalidArgument("cannot format number");
    return std::string(buf, end);
}

/// JSON has no infinity; non-finite values are encoded as strings.
inline json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

inline double read_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfiniteGamma;
    if (s == "-inf") return -kInfiniteGamma;
    if (s == "nan") return std::nan("");
    throw InvalidArgument("not a number: " + s);
}

inline json mesh_to_json(const GradedMesh& mesh) {
    json nodes = json::array();
    for (double r : mesh.nodes()) nodes.push_back(r);
    return json{{"nodes", std::move(nodes)}};
}

inline GradedMesh mesh_from_json(const json& j) {
    return GradedMesh::from_nodes(j.at("nodes").get<std::vector<double>>());
}

inline json sample_to_json(const EigenResult& r, const GradedMesh& mesh) {
    return json{{"gamma", number(r.gamma)},
                {"lambda", number(r.lambda)},
                {"lambda_prime", number(r.lambda_prime)},
                {"trace", number(r.trace_value)},
                {"gap", number(r.gap)},
                {"n", mesh.elements()},
                {"q", mesh.grading()}};
}

inline json sample_to_json(const SweepSample& s, const GradedMesh& mesh) {
    json j{{"gamma", number(s.gamma)},
           {"lambda", number(s.lambda)},
           {"lambda_prime", number(s.lambda_prime)},
           {"trace", number(s.trace)},
           {"gap", number(s.gap)},
           {"n", mesh.elements()},
           {"q", mesh.grading()}};
    if (!s.ok) j["error"] = s.error;
    return j;
}

inline json sweep_to_json(const GammaSweep& sweep, const GradedMesh& mesh) {
    json samples = json::array();
    for (const auto& s : sweep.samples) samples.push_back(sample_to_json(s, mesh));
    return json{{"samples", std::move(samples)},
                {"dirichlet_lambda", number(sweep.dirichlet_lambda)},
                {"monotone", sweep.monotonicity_ok},
                {"sign_law", sweep.sign_ok},
                {"below_dirichlet", sweep.below_dirichlet_ok}};
}

inline void write_sweep_csv(std::ostream& os, const GammaSweep& sweep) {
    os << "gamma,lambda,lambda_prime,trace,gap\n";
    for (const auto& s : sweep.samples) {
        os << format_double(s.gamma) << ',' << format_double(s.lambda) << ',' << format_double(s.lambda_prime)
           << ',' << format_double(s.trace) << ',' << format_double(s.gap) << '\n';
    }
}

inline json bvp_to_json(const BVPSolution& sol) {
    json samples = json::array();
    for (const auto& [r, u] : sol.u_samples) samples.push_back(json::array({r, u}));
    return json{{"log_amplitude", number(sol.log_amplitude)},
                {"lambda", number(sol.lambda)},
                {"lambda_tilde", number(sol.lambda_tilde)},
                {"sigma0", number(sol.sigma0)},
                {"beta", number(sol.beta)},
                {"dirichlet_lambda", number(sol.dirichlet_lambda)},
                {"margin_to_dirichlet", number(sol.margin_to_dirichlet)},
                {"boundary_residual", number(sol.boundary_residual)},
                {"weak_residual", number(sol.weak_residual)},
                {"samples", std::move(samples)}};
}

inline void write_profile_csv(std::ostream& os, const BVPSolution& sol) {
    os << "r,u,v\n";
    for (const auto& [r, u] : sol.u_samples) {
        os << format_double(r) << ',' << format_double(u) << ',' << format_double(std::exp(sol.sigma0 * u))
           << '\n';
    }
}

} // namespace robinrad::io
