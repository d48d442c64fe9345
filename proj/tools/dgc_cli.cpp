// dgc: command-line front end for discrete geodesic calculus.
//
// Exit codes: 0 success, 1 audit failure, 2 solver failure, 3 invalid input.

#include "dgc/study.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace dgc;

namespace {

constexpr int kSuccess = 0;
constexpr int kAuditFailure = 1;
constexpr int kSolverFailure = 2;
constexpr int kInvalidConfig = 3;

struct Common {
    std::string model = "sphere-chart";
    std::string xa, xb;
    int steps = 8;
    std::string out;
    std::string config;
    std::uint64_t seed = 0;
    double tol = -1.0;  // negative: model default
    int rod_nodes = 16;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--model", c.model, "flat|sphere-chart|sdf-sphere|sdf-circle|sdf-ellipsoid|rod-simplified|rod-full");
    app->add_option("--xa", c.xa, "start point, comma separated");
    app->add_option("--xb", c.xb, "end point, comma separated");
    app->add_option("--K", c.steps, "number of steps")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "output file or directory");
    app->add_option("--config", c.config, "JSON study config");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--tol", c.tol, "tolerance (Newton or audit)");
    app->add_option("--rod-nodes", c.rod_nodes, "nodes per rod curve")->check(CLI::Range(8, 4096));
}

ModelBundle model_of(const Common& c) {
    ModelOptions o;
    o.rod.nodes = c.rod_nodes;
    return make_model(c.model, o);
}

Coord coord_or(const std::string& text, const Coord& fallback, const ModelBundle& m) {
    if (text.empty()) return fallback;
    Coord x = parse_coord(text);
    if (x.size() != m.space.model().dim())
        throw PreconditionError("expected " + std::to_string(m.space.model().dim()) + " coordinates, got '" + text + "'");
    return x;
}

SolverConfig solver_of(const Common& c) {
    SolverConfig s;
    if (c.tol > 0.0) s.newton_tol = c.tol;
    s.validate();
    return s;
}

OpConfig op_of(const Common& c) {
    OpConfig o;
    o.inner = solver_of(c);
    return o;
}

// Writes to the file named by --out, or stdout.
template <class F>
void emit(const std::string& out, F&& write) {
    if (out.empty()) {
        write(std::cout);
        return;
    }
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    std::ofstream f(out);
    if (!f) throw Error("cannot open " + out);
    write(f);
}

void print_vector(std::ostream& out, const char* label, const Coord& v) {
    out << std::setprecision(17) << label;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : " ") << v[i];
    out << '\n';
}

int cmd_geodesic(const Common& c) {
    const auto m = model_of(c);
    const Coord xa = coord_or(c.xa, m.xa, m), xb = coord_or(c.xb, m.xb, m);
    const auto r = solve_geodesic(xa, xb, c.steps, m.space, solver_of(c));
    std::cerr << "converged=" << r.converged << " iterations=" << r.iterations << " residual=" << r.residual
              << " energy=" << std::setprecision(17) << r.energy << " length=" << r.length << '\n';
    if (!r.converged) return kSolverFailure;
    emit(c.out, [&](std::ostream& o) { write_path_csv(r.path, o); });
    return kSuccess;
}

int cmd_log(const Common& c) {
    const auto m = model_of(c);
    const Coord xa = coord_or(c.xa, m.xa, m), xb = coord_or(c.xb, m.xb, m);
    const Coord v = discrete_log(xa, xb, c.steps, m.space, op_of(c));
    emit(c.out, [&](std::ostream& o) {
        print_vector(o, "log", v);
        print_vector(o, "K_log", static_cast<double>(c.steps) * v);
    });
    return kSuccess;
}

int cmd_exp(const Common& c, const std::string& zeta_text, bool path_out) {
    const auto m = model_of(c);
    const Coord xa = coord_or(c.xa, m.xa, m);
    if (zeta_text.empty()) throw PreconditionError("--zeta is required");
    const Coord zeta = coord_or(zeta_text, Coord{}, m);
    const auto path = discrete_exp_path(xa, zeta, c.steps, m.space, op_of(c));
    emit(c.out, [&](std::ostream& o) {
        if (path_out)
            write_path_csv(path, o);
        else
            print_vector(o, "exp", path[path.steps()]);
    });
    return kSuccess;
}

int cmd_transport(const Common& c, const std::string& w_text, const std::string& trace_out) {
    const auto m = model_of(c);
    const Coord xa = coord_or(c.xa, m.xa, m), xb = coord_or(c.xb, m.xb, m);
    const Coord w = coord_or(w_text, m.w, m);
    const auto geo = solve_geodesic(xa, xb, c.steps, m.space, solver_of(c));
    if (!geo.converged) {
        std::cerr << "geodesic did not converge, residual " << geo.residual << '\n';
        return kSolverFailure;
    }
    const auto r = parallel_transport(geo.path, m.displacement(xa, w / c.steps), m.space, op_of(c));
    emit(c.out, [&](std::ostream& o) {
        print_vector(o, "zeta_K", r.zeta);
        print_vector(o, "K_zeta_K", static_cast<double>(c.steps) * r.zeta);
    });
    if (!trace_out.empty()) emit(trace_out, [&](std::ostream& o) { write_trace_csv(r.trace, o); });
    return kSuccess;
}

int cmd_converge(const Common& c, bool model_set) {
    StudyConfig cfg;
    if (!c.config.empty()) {
        std::ifstream f(c.config);
        if (!f) throw ConfigError("cannot open config " + c.config);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = study_config_from_json(j);
    }
    if (model_set || c.config.empty()) cfg.model = c.model;
    if (!c.xa.empty()) cfg.xa = parse_coord(c.xa);
    if (!c.xb.empty()) cfg.xb = parse_coord(c.xb);
    if (!c.out.empty()) cfg.output_dir = c.out;
    cfg.seed = c.seed;
    cfg.rod_nodes = c.rod_nodes;
    if (c.tol > 0.0) cfg.solver.newton_tol = cfg.op_config.inner.newton_tol = c.tol;
    cfg.validate();

    const auto report = run_convergence_study(cfg);
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream f(fs::path(cfg.output_dir) / "convergence.csv");
        write_report_csv(report, f);
    }
    {
        std::ofstream f(fs::path(cfg.output_dir) / "orders.json");
        f << std::setw(2) << orders_json(report.orders) << '\n';
    }
    write_report_csv(report, std::cout);
    std::cout << "orders " << orders_json(report.orders).dump() << '\n' << "reference: " << report.reference << '\n';
    return kSuccess;
}

int cmd_consistency(const Common& c, int samples) {
    const auto m = model_of(c);
    const double tol = c.tol > 0.0 ? c.tol : m.consistency_tol;
    ModelOptions o;
    o.rod.nodes = c.rod_nodes;
    const auto audit = run_consistency_audit(c.model, samples, tol, c.seed, o);
    std::cout << "model=" << c.model << " samples=" << audit.samples << " failures=" << audit.failures
              << " worst_residual=" << std::setprecision(6) << audit.worst_residual << " tol=" << tol << '\n';
    for (std::size_t i = 0; i < audit.reports.size(); ++i) {
        for (const auto& e : audit.reports[i].entries)
            if (!e.passed) std::cout << "  sample " << i << ": " << e.identity << " residual " << e.residual << '\n';
    }
    return audit.passed() ? kSuccess : kAuditFailure;
}

Coord read_curve_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot open curve " + path);
    return read_curve_csv(f);
}

int cmd_rod_morph(const Common& c, const std::string& a, const std::string& b, const std::string& kind, double delta) {
    if (a.empty() || b.empty()) throw PreconditionError("--curve-a and --curve-b are required");
    const RodEnergyKind k = kind == "full" ? RodEnergyKind::full : RodEnergyKind::simplified;
    const auto r = run_rod_morph(read_curve_file(a), read_curve_file(b), c.steps, k, c.out.empty() ? "." : c.out,
                                 delta, solver_of(c));
    std::cout << "converged iterations=" << r.geodesic.iterations << " residual=" << r.geodesic.residual
              << " energy=" << std::setprecision(17) << r.geodesic.energy << '\n';
    for (std::size_t i = 0; i < r.segment_energies.size(); ++i)
        std::cout << "segment " << i + 1 << ' ' << r.segment_energies[i] << '\n';
    return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete geodesic calculus"};
    app.require_subcommand(1);
    Common common;
    std::string zeta, w, trace, curve_a, curve_b, kind = "simplified";
    bool path_out = false;
    int samples = 100;
    double delta = 0.1;

    auto* geo = app.add_subcommand("geodesic", "solve the discrete geodesic between xa and xb");
    auto* log = app.add_subcommand("log", "discrete logarithm LOG^K_xa(xb)");
    auto* exp = app.add_subcommand("exp", "discrete exponential EXP^K_xa(zeta)");
    auto* pt = app.add_subcommand("transport", "parallel transport of w/K along the K-geodesic xa -> xb");
    auto* conv = app.add_subcommand("converge", "convergence study over K = 2^k");
    auto* cons = app.add_subcommand("consistency", "consistency audit at random points");
    auto* rod = app.add_subcommand("rod-morph", "geodesic between two rod curves");
    for (auto* s : {geo, log, exp, pt, conv, cons, rod}) add_common(s, common);
    exp->add_option("--zeta", zeta, "initial displacement");
    exp->add_flag("--path", path_out, "write the whole shooting path as CSV");
    pt->add_option("--w", w, "vector to transport (default: model seed)");
    pt->add_option("--trace", trace, "CSV file for the ladder trace");
    cons->add_option("--samples", samples, "number of random points")->check(CLI::PositiveNumber);
    rod->add_option("--curve-a", curve_a, "CSV of the first curve");
    rod->add_option("--curve-b", curve_b, "CSV of the second curve");
    rod->add_option("--kind", kind, "simplified|full")->check(CLI::IsMember({"simplified", "full"}));
    rod->add_option("--delta", delta, "rod thickness")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kInvalidConfig;
    }

    try {
        if (*geo) return cmd_geodesic(common);
        if (*log) return cmd_log(common);
        if (*exp) return cmd_exp(common, zeta, path_out);
        if (*pt) return cmd_transport(common, w, trace);
        if (*conv) return cmd_converge(common, conv->count("--model") > 0);
        if (*cons) return cmd_consistency(common, samples);
        if (*rod) return cmd_rod_morph(common, curve_a, curve_b, kind, delta);
    } catch (const StudyFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << " (residual " << e.last_residual << ")\n";
        return kSolverFailure;
    } catch (const LinearAlgebraError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverFailure;
    }
    return kSuccess;
}
