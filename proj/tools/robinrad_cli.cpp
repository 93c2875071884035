// robinrad: weighted Robin eigenvalues and radial Robin BVPs on balls.
//
// Exit codes: 0 ok, 2 existence gate failed, 3 no positive solution,
// 4 validation failure, 64 bad input, 1 other numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robinrad/robinrad.hpp"

namespace {

using namespace robinrad;
using io::json;

constexpr int kExitGate = 2;
constexpr int kExitNoPositive = 3;
constexpr int kExitValidation = 4;
constexpr int kExitBadInput = 64;

struct RunConfig {
    std::string weight = "const:1";
    int dim = 3;
    std::string gamma = "1";
    double beta = 1.0;
    double lambda = 1.0;
    double sigma0 = 1.0;
    std::size_t n = kDefaultElements;
    double grade = kDefaultGrading;
    double rtol = kDefaultBvpRtol;
    double eps = 0.1;
    double radius = 1.0;
    double tol = kDefaultEigenTol;
    std::string out = "json";
    std::uint64_t seed = ValidationConfig{}.seed;
    std::string output;
    bool n_given = false;
};

std::optional<std::string> env(const char* name) {
    if (const char* v = std::getenv(name); v && *v) return std::string(v);
    return std::nullopt;
}

void apply_environment(RunConfig& cfg) {
    if (auto v = env("ROBINRAD_N")) {
        const double n = detail::parse_number(*v, "ROBINRAD_N");
        if (!(n >= 2.0) || n != static_cast<double>(static_cast<std::size_t>(n))) {
            throw InvalidArgument("ROBINRAD_N must be an integer >= 2");
        }
        cfg.n = static_cast<std::size_t>(n);
        cfg.n_given = true;
    }
    if (auto v = env("ROBINRAD_RTOL")) cfg.rtol = detail::parse_number(*v, "ROBINRAD_RTOL");
}

double parse_gamma_value(std::string_view s) {
    if (s == "inf" || s == "+inf") return kInfiniteGamma;
    return detail::parse_number(s, "gamma");
}

/// "g", "inf" or "start:stop:count" with both endpoints included.
std::vector<double> parse_gammas(const std::string& s) {
    const auto c1 = s.find(':');
    if (c1 == std::string::npos) return {parse_gamma_value(s)};
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos) {
        throw InvalidArgument("gamma range must be start:stop:count");
    }
    const double a = detail::parse_number(std::string_view(s).substr(0, c1), "gamma start");
    const double b = detail::parse_number(std::string_view(s).substr(c1 + 1, c2 - c1 - 1), "gamma stop");
    const double count = detail::parse_number(std::string_view(s).substr(c2 + 1), "gamma count");
    if (!(count >= 1.0) || count != static_cast<double>(static_cast<long>(count))) {
        throw InvalidArgument("gamma count must be a positive integer");
    }
    const auto k = static_cast<std::size_t>(count);
    if (k == 1) return {a};
    if (!(b > a)) throw InvalidArgument("gamma range needs stop > start");
    std::vector<double> g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1);
    g.back() = b;
    return g;
}

class Emitter {
public:
    explicit Emitter(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidArgument("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    void write(const json& j) { stream() << j.dump(2) << '\n'; }

private:
    std::ofstream file_;
};

struct Context {
    RunConfig cfg;
    RadialWeight weight;
    Dimension dim;
    GradedMesh mesh;
};

Context prepare(const RunConfig& cfg, double mesh_radius) {
    const RadialWeight w = parse_weight(cfg.weight);
    const Dimension dim(cfg.dim);
    const auto report = validate_weight(w, dim);
    if (!report.admissible) throw InvalidArgument("weight not admissible: " + report.reason);
    if (cfg.out != "json" && cfg.out != "csv") throw InvalidArgument("--out must be json or csv");
    return {cfg, w, dim, build_mesh(cfg.n, cfg.grade, mesh_radius)};
}

json header(const Context& c) {
    return json{{"weight", format_weight(c.weight)}, {"dim", c.dim.value()}};
}

int run_eig(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const double g = parse_gamma_value(cfg.gamma);
    const EigenResult r = robin_eigenvalue(c.weight, c.dim, g, c.mesh, SolveOptions{cfg.tol});
    json j = header(c);
    j.update(io::sample_to_json(r, c.mesh));
    Emitter(cfg.output).write(j);
    return 0;
}

int run_dirichlet(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const EigenResult r = dirichlet_eigenvalue(c.weight, c.dim, c.mesh, SolveOptions{cfg.tol});
    json j = header(c);
    j.update(io::sample_to_json(r, c.mesh));
    Emitter(cfg.output).write(j);
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const auto gammas = parse_gammas(cfg.gamma);
    const GammaSweep sw = gamma_sweep(c.weight, c.dim, gammas, c.mesh, SolveOptions{cfg.tol});
    Emitter out(cfg.output);
    if (cfg.out == "csv") {
        io::write_sweep_csv(out.stream(), sw);
    } else {
        json j = header(c);
        j.update(io::sweep_to_json(sw, c.mesh));
        out.write(j);
    }
    return 0;
}

int run_plateau(const RunConfig& cfg) {
    // The plateau detector resolves the collapse of lambda' only on fine meshes.
    RunConfig local = cfg;
    if (!cfg.n_given) local.n = 8192;
    const Context c = prepare(local, cfg.radius);
    const PlateauEstimate p = find_plateau(c.weight, c.dim, c.mesh);
    json j = header(c);
    j.update(json{{"gamma_bar", io::number(p.gamma_bar)},
                  {"found", p.found},
                  {"min_slope", io::number(p.min_slope)},
                  {"lambda_at", io::number(p.lambda_at)},
                  {"dirichlet_lambda", io::number(p.dirichlet_lambda)},
                  {"relative_gap", io::number(p.relative_gap)},
                  {"n", c.mesh.elements()},
                  {"q", c.mesh.grading()}});
    Emitter(cfg.output).write(j);
    return 0;
}

int run_trace_const(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const TraceConstant t = trace_constant(c.weight, c.dim, cfg.eps, c.mesh, cfg.tol);
    json j = header(c);
    j.update(json{{"eps", t.eps}, {"value", t.value}, {"equality_defect", t.equality_defect},
                  {"n", c.mesh.elements()}, {"q", c.mesh.grading()}});
    Emitter(cfg.output).write(j);
    return 0;
}

int run_equiv_const(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const EquivalenceConstant e = equivalence_constant(c.weight, c.dim, c.mesh, cfg.tol);
    json j = header(c);
    j.update(json{{"value", e.value}, {"ratio_at_maximizer", e.ratio_at_maximizer},
                  {"n", c.mesh.elements()}, {"q", c.mesh.grading()}});
    Emitter(cfg.output).write(j);
    return 0;
}

int run_local_threshold(const RunConfig& cfg) {
    const Context c = prepare(cfg, 1.0);
    const double v = local_threshold(c.weight, c.dim, cfg.radius, cfg.n, cfg.grade);
    json j = header(c);
    j.update(json{{"radius", cfg.radius}, {"lambda", v}, {"n", cfg.n}, {"q", cfg.grade}});
    Emitter(cfg.output).write(j);
    return 0;
}

int run_solve(const RunConfig& cfg) {
    const Context c = prepare(cfg, cfg.radius);
    const BVPSolution s = solve_bvp(c.weight, c.dim, cfg.lambda, cfg.beta, cfg.sigma0, c.mesh, BvpOptions{cfg.rtol});
    Emitter out(cfg.output);
    if (cfg.out == "csv") {
        io::write_profile_csv(out.stream(), s);
    } else {
        json j = header(c);
        j.update(io::bvp_to_json(s));
        out.write(j);
    }
    return 0;
}

int run_validate(const RunConfig& cfg) {
    ValidationConfig vc;
    vc.seed = cfg.seed;
    vc.n = cfg.n_given ? cfg.n : 0;
    vc.rtol = cfg.rtol;
    const SuiteReport rep = run_validation(vc);
    Emitter(cfg.output).stream() << rep.to_text();
    return rep.all_passed() ? 0 : kExitValidation;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool weight = true) {
    if (weight) {
        sub->add_option("--weight", cfg.weight, "const:c | hardy | power:c:p | sum:t1+t2+...");
        sub->add_option("--dim", cfg.dim, "space dimension N >= 3");
    }
    sub->add_option_function<std::size_t>(
        "--n", [&cfg](std::size_t n) { cfg.n = n; cfg.n_given = true; }, "number of elements");
    sub->add_option("--grade", cfg.grade, "mesh grading exponent q");
    sub->add_option("--out", cfg.out, "json or csv");
    sub->add_option("--output", cfg.output, "write to this file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        apply_environment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }

    CLI::App app{"Weighted Robin eigenvalues and radial Robin problems on balls"};
    app.require_subcommand(1);

    auto* eig = app.add_subcommand("eig", "first Robin eigenvalue at one gamma");
    add_common(eig, cfg);
    eig->add_option("--gamma", cfg.gamma, "Robin parameter or inf");
    eig->add_option("--radius", cfg.radius, "ball radius");
    eig->add_option("--tol", cfg.tol, "eigenvalue tolerance");

    auto* dir = app.add_subcommand("dirichlet", "first weighted Dirichlet eigenvalue");
    add_common(dir, cfg);
    dir->add_option("--radius", cfg.radius, "ball radius");
    dir->add_option("--tol", cfg.tol, "eigenvalue tolerance");

    auto* sweep = app.add_subcommand("sweep", "eigenvalue along a gamma range");
    add_common(sweep, cfg);
    sweep->add_option("--gamma", cfg.gamma, "start:stop:count (inclusive) or a single value");
    sweep->add_option("--radius", cfg.radius, "ball radius");
    sweep->add_option("--tol", cfg.tol, "eigenvalue tolerance");

    auto* plateau = app.add_subcommand("plateau", "threshold beyond which lambda(gamma) is flat");
    add_common(plateau, cfg);
    plateau->add_option("--radius", cfg.radius, "ball radius");

    auto* trace = app.add_subcommand("trace-const", "best C in b <= eps k + C m_f");
    add_common(trace, cfg);
    trace->add_option("--eps", cfg.eps, "eps > 0");
    trace->add_option("--radius", cfg.radius, "ball radius");
    trace->add_option("--tol", cfg.tol, "eigenvalue tolerance");

    auto* equiv = app.add_subcommand("equiv-const", "sup (k + m_1) / (k + m_f)");
    add_common(equiv, cfg);
    equiv->add_option("--radius", cfg.radius, "ball radius");
    equiv->add_option("--tol", cfg.tol, "eigenvalue tolerance");

    auto* local = app.add_subcommand("local-threshold", "Dirichlet eigenvalue of the centered ball B_r");
    add_common(local, cfg);
    local->add_option("--radius", cfg.radius, "radius r of the inner ball");

    auto* solve = app.add_subcommand("solve", "radial solution of the nonlinear Robin problem");
    add_common(solve, cfg);
    solve->add_option("--lambda", cfg.lambda, "lambda >= 0");
    solve->add_option("--beta", cfg.beta, "Robin coefficient beta > 0");
    solve->add_option("--sigma0", cfg.sigma0, "gradient coefficient sigma0 > 0");
    solve->add_option("--rtol", cfg.rtol, "ODE relative tolerance");
    solve->add_option("--radius", cfg.radius, "ball radius");

    auto* validate = app.add_subcommand("validate", "run the reproduction suite");
    add_common(validate, cfg, false);
    validate->add_option("--seed", cfg.seed, "seed for the randomized checks");
    validate->add_option("--rtol", cfg.rtol, "ODE relative tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    try {
        if (*eig) return run_eig(cfg);
        if (*dir) return run_dirichlet(cfg);
        if (*sweep) return run_sweep(cfg);
        if (*plateau) return run_plateau(cfg);
        if (*trace) return run_trace_const(cfg);
        if (*equiv) return run_equiv_const(cfg);
        if (*local) return run_local_threshold(cfg);
        if (*solve) return run_solve(cfg);
        if (*validate) return run_validate(cfg);
    } catch (const ExistenceGateFailed& e) {
        std::cerr << "existence gate failed: " << e.what() << '\n';
        return kExitGate;
    } catch (const NoPositiveSolution& e) {
        std::cerr << "no positive solution: " << e.what() << '\n';
        return kExitNoPositive;
    } catch (const InvalidArgument& e) {
        std::cerr << "bad input: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitBadInput;
}
