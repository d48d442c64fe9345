#include "dgc/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace dgc {

using nlohmann::json;

void StudyConfig::validate() const {
    if (k_min < 0 || k_max < k_min) throw ConfigError("k_exponents must be a nonempty range of nonnegative integers");
    if (k_max > 16) throw ConfigError("k_exponents above 16 are not supported");
    if (rod_nodes < 8) throw ConfigError("rod_nodes must be at least 8");
    if (!(rod_delta > 0.0)) throw ConfigError("rod_delta must be positive");
    const auto& names = model_names();
    if (std::find(names.begin(), names.end(), model) == names.end())
        throw ConfigError("unknown model '" + model + "'");
    try {
        solver.validate();
        op_config.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<int> StudyConfig::step_counts() const {
    std::vector<int> ks;
    for (int k = k_min; k <= k_max; ++k) ks.push_back(1 << k);
    return ks;
}

ModelOptions StudyConfig::model_options() const {
    ModelOptions o;
    o.rod = RodParams{rod_nodes, rod_delta};
    return o;
}

namespace {

Coord coord_from_json(const json& j, const char* key) {
    if (!j.is_array() || j.empty()) throw ConfigError(std::string(key) + " must be a nonempty array of numbers");
    Coord c(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string(key) + " must contain only numbers");
        c[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return c;
}

json coord_to_json(const Coord& c) {
    json a = json::array();
    for (Eigen::Index i = 0; i < c.size(); ++i) a.push_back(c[i]);
    return a;
}

Damping damping_from(const std::string& s) {
    if (s == "none") return Damping::none;
    if (s == "armijo") return Damping::armijo;
    throw ConfigError("damping must be 'none' or 'armijo'");
}

Exp2Method method_from(const std::string& s) {
    if (s == "newton") return Exp2Method::newton;
    if (s == "fixed_point") return Exp2Method::fixed_point;
    throw ConfigError("exp2 method must be 'newton' or 'fixed_point'");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

SolverConfig solver_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("solver must be an object");
    check_keys(j, {"newton_tol", "max_iter", "damping"}, "solver");
    SolverConfig s;
    s.newton_tol = j.value("newton_tol", s.newton_tol);
    s.max_iter = j.value("max_iter", s.max_iter);
    if (j.contains("damping")) s.damping = damping_from(j.at("damping").get<std::string>());
    return s;
}

json solver_to_json(const SolverConfig& s) {
    return {{"newton_tol", s.newton_tol},
            {"max_iter", s.max_iter},
            {"damping", s.damping == Damping::armijo ? "armijo" : "none"}};
}

}  // namespace

StudyConfig study_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        check_keys(j,
                   {"model", "xa", "xb", "w", "k_exponents", "solver", "op_config", "output_dir", "seed",
                    "rod_nodes", "rod_delta"},
                   "config");
        StudyConfig c;
        c.model = j.value("model", c.model);
        if (j.contains("xa")) c.xa = coord_from_json(j.at("xa"), "xa");
        if (j.contains("xb")) c.xb = coord_from_json(j.at("xb"), "xb");
        if (j.contains("w")) c.w = coord_from_json(j.at("w"), "w");
        if (j.contains("k_exponents")) {
            const auto& k = j.at("k_exponents");
            if (!k.is_array() || k.size() != 2) throw ConfigError("k_exponents must be [min, max]");
            c.k_min = k[0].get<int>();
            c.k_max = k[1].get<int>();
        }
        if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
        if (j.contains("op_config")) {
            const auto& o = j.at("op_config");
            if (!o.is_object()) throw ConfigError("op_config must be an object");
            check_keys(o, {"inner", "fixed_point_tol", "max_fixed_point_iter", "method"}, "op_config");
            if (o.contains("inner")) c.op_config.inner = solver_from_json(o.at("inner"));
            c.op_config.fixed_point_tol = o.value("fixed_point_tol", c.op_config.fixed_point_tol);
            c.op_config.max_fixed_point_iter = o.value("max_fixed_point_iter", c.op_config.max_fixed_point_iter);
            if (o.contains("method")) c.op_config.method = method_from(o.at("method").get<std::string>());
        }
        c.output_dir = j.value("output_dir", c.output_dir);
        c.seed = j.value("seed", c.seed);
        c.rod_nodes = j.value("rod_nodes", c.rod_nodes);
        c.rod_delta = j.value("rod_delta", c.rod_delta);
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

json to_json(const StudyConfig& c) {
    json j{{"model", c.model},
           {"k_exponents", {c.k_min, c.k_max}},
           {"solver", solver_to_json(c.solver)},
           {"op_config",
            {{"inner", solver_to_json(c.op_config.inner)},
             {"fixed_point_tol", c.op_config.fixed_point_tol},
             {"max_fixed_point_iter", c.op_config.max_fixed_point_iter},
             {"method", c.op_config.method == Exp2Method::fixed_point ? "fixed_point" : "newton"}}},
           {"output_dir", c.output_dir},
           {"seed", c.seed},
           {"rod_nodes", c.rod_nodes},
           {"rod_delta", c.rod_delta}};
    if (c.xa) j["xa"] = coord_to_json(*c.xa);
    if (c.xb) j["xb"] = coord_to_json(*c.xb);
    if (c.w) j["w"] = coord_to_json(*c.w);
    return j;
}

namespace {

// Everything the error table needs from one resolution K.
struct Sample {
    DiscretePath path;
    Coord log;        // K * LOG^K
    Coord exp;        // EXP^K(v / K)
    Coord transport;  // K * P(w / K)
};

Sample run_operators(const ModelBundle& m, const Coord& xa, const Coord& xb, const Coord& v, const Coord& w, int K,
                     const StudyConfig& cfg) {
    GeodesicResult geo;
    try {
        geo = solve_geodesic(xa, xb, K, m.space, cfg.solver);
    } catch (const Error& e) {
        throw StudyFailure(K, "geodesic", e.what());
    }
    if (!geo.converged)
        throw StudyFailure(K, "geodesic", "no convergence (residual " + std::to_string(geo.residual) + ")");
    Sample s{geo.path, static_cast<double>(K) * (geo.path[1] - geo.path[0]), {}, {}};
    try {
        s.exp = discrete_exp(xa, m.displacement(xa, v / K), K, m.space, cfg.op_config);
    } catch (const Error& e) {
        throw StudyFailure(K, "exp", e.what());
    }
    try {
        s.transport = static_cast<double>(K) *
                      parallel_transport(geo.path, m.displacement(xa, w / K), m.space, cfg.op_config).zeta;
    } catch (const Error& e) {
        throw StudyFailure(K, "transport", e.what());
    }
    return s;
}

}  // namespace

ConvergenceReport run_convergence_study(const StudyConfig& cfg) {
    cfg.validate();
    const ModelBundle m = make_model(cfg.model, cfg.model_options());
    const Coord xa = cfg.xa.value_or(m.xa);
    const Coord xb = cfg.xb.value_or(m.xb);
    const Coord w = cfg.w.value_or(m.w);
    if (xa.size() != m.space.model().dim() || xb.size() != xa.size() || w.size() != xa.size())
        throw ConfigError("xa, xb and w must have the model dimension " + std::to_string(m.space.model().dim()));
    m.space.model().check_admissible(xa);
    m.space.model().check_admissible(xb);

    const std::vector<int> steps = cfg.step_counts();
    ConvergenceReport report;

    // Reference: analytic oracle, or the discrete solution at 4 K_max.
    std::function<Coord(double)> ref_geo;
    Coord ref_log, ref_exp, ref_pt, v;
    if (m.oracle) {
        report.reference = "analytic oracle: " + m.oracle->description();
        v = m.oracle->log(xa, xb);
        ref_geo = [&](double t) { return m.oracle->geodesic(xa, xb, t); };
        ref_log = v;
        ref_exp = m.oracle->exp(xa, v);
        ref_pt = m.oracle->transport(xa, xb, w);
    } else {
        const int k_ref = 4 * steps.back();
        report.reference = "Richardson self-convergence against K=" + std::to_string(k_ref) + " (not a true error)";
        // The reference initial velocity comes from the high-resolution
        // geodesic; the geodesic is solved first to obtain it.
        GeodesicResult geo = solve_geodesic(xa, xb, k_ref, m.space, cfg.solver);
        if (!geo.converged) throw StudyFailure(k_ref, "geodesic", "reference solve did not converge");
        v = static_cast<double>(k_ref) * (geo.path[1] - geo.path[0]);
        const Sample ref = run_operators(m, xa, xb, v, w, k_ref, cfg);
        ref_log = ref.log;
        ref_exp = ref.exp;
        ref_pt = ref.transport;
        auto ref_path = std::make_shared<DiscretePath>(ref.path);
        ref_geo = [ref_path, k_ref](double t) {
            return (*ref_path)[static_cast<std::size_t>(std::lround(t * k_ref))];
        };
    }

    std::vector<std::future<Sample>> jobs;
    jobs.reserve(steps.size());
    for (int K : steps)
        jobs.push_back(std::async(std::launch::async, [&, K] { return run_operators(m, xa, xb, v, w, K, cfg); }));

    std::vector<double> eg, el, ee, ep;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const int K = steps[i];
        const Sample s = jobs[i].get();
        ConvergenceRow row;
        row.K = K;
        for (int k = 0; k <= K; ++k)
            row.err_geo = std::max(row.err_geo, (s.path[static_cast<std::size_t>(k)] - ref_geo(double(k) / K)).norm());
        row.err_log = (s.log - ref_log).norm();
        row.err_exp = (s.exp - ref_exp).norm();
        row.err_pt = (s.transport - ref_pt).norm();
        report.rows.push_back(row);
        eg.push_back(row.err_geo);
        el.push_back(row.err_log);
        ee.push_back(row.err_exp);
        ep.push_back(row.err_pt);
    }

    // Orders need three positive errors; an exact model (flat) has none.
    auto order = [&](const std::vector<double>& e) {
        const auto positive = std::count_if(e.begin(), e.end(), [](double x) { return x > 0.0; });
        return positive >= 3 ? fit_order(e, steps) : std::nan("");
    };
    report.orders = {order(eg), order(el), order(ee), order(ep)};
    return report;
}

double fit_order(const std::vector<double>& errors, const std::vector<int>& steps, std::vector<std::string>* warnings) {
    if (errors.size() != steps.size()) throw PreconditionError("fit_order: errors and Ks differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i]) || steps[i] <= 0) {
            if (warnings)
                warnings->push_back("fit_order: excluded K=" + std::to_string(steps[i]) +
                                    " with error " + std::to_string(errors[i]));
            continue;
        }
        xs.push_back(std::log(1.0 / steps[i]));
        ys.push_back(std::log(errors[i]));
    }
    if (xs.size() < 3) throw PreconditionError("fit_order: fewer than 3 positive errors");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw PreconditionError("fit_order: Ks must not all be equal");
    return sxy / sxx;
}

void write_report_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "K,err_geo,err_log,err_exp,err_pt\n" << std::setprecision(17);
    for (const auto& r : report.rows)
        out << r.K << ',' << r.err_geo << ',' << r.err_log << ',' << r.err_exp << ',' << r.err_pt << '\n';
}

ConvergenceReport read_report_csv(std::istream& in) {
    ConvergenceReport report;
    std::string line;
    if (!std::getline(in, line) || line.rfind("K,err_geo,err_log,err_exp,err_pt", 0) != 0)
        throw PreconditionError("convergence CSV: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw PreconditionError("convergence CSV: expected 5 columns in '" + line + "'");
        ConvergenceRow r;
        try {
            r.K = std::stoi(cells[0]);
            r.err_geo = std::stod(cells[1]);
            r.err_log = std::stod(cells[2]);
            r.err_exp = std::stod(cells[3]);
            r.err_pt = std::stod(cells[4]);
        } catch (const std::exception&) {
            throw PreconditionError("convergence CSV: malformed row '" + line + "'");
        }
        report.rows.push_back(r);
    }
    return report;
}

json orders_json(const FittedOrders& o) {
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"geo", num(o.geo)}, {"log", num(o.log)}, {"exp", num(o.exp)}, {"pt", num(o.pt)}};
}

AuditReport run_consistency_audit(const std::string& model_name, int samples, double tol, std::uint64_t seed,
                                  const ModelOptions& options) {
    if (samples < 1) throw PreconditionError("consistency audit needs at least one sample");
    const ModelBundle m = make_model(model_name, options);
    std::mt19937_64 rng(seed);
    AuditReport audit;
    audit.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const Coord x = m.sample(rng);
        ConsistencyReport r = check_consistency(m.space.model(), x, tol);
        if (!r.passed()) ++audit.failures;
        audit.worst_residual = std::max(audit.worst_residual, r.worst_residual());
        audit.reports.push_back(std::move(r));
    }
    return audit;
}

RodMorphResult run_rod_morph(const Coord& curve_a, const Coord& curve_b, int steps, RodEnergyKind kind,
                             const std::filesystem::path& out_dir, double delta, const SolverConfig& solver) {
    const int n = rod_node_count(curve_a);
    if (rod_node_count(curve_b) != n) throw PreconditionError("rod morph: curves have different node counts");
    check_rod_admissible(curve_a);
    check_rod_admissible(curve_b);
    const RodParams params{n, delta};
    const Space space(rod_energy(kind, params), rod_gauge(kind, curve_a));

    RodMorphResult result;
    result.geodesic = solve_geodesic(curve_a, curve_b, steps, space, solver);
    if (!result.geodesic.converged)
        throw ConvergenceError("rod morph did not converge", result.geodesic.residual);

    const auto& path = result.geodesic.path;
    for (int k = 1; k <= steps; ++k)
        result.segment_energies.push_back(steps * space.model().w(path[k - 1], path[k]));

    std::filesystem::create_directories(out_dir);
    const int width = static_cast<int>(std::to_string(steps).size());
    for (int k = 0; k <= steps; ++k) {
        std::ostringstream name;
        name << "curve_" << std::setw(width) << std::setfill('0') << k << ".csv";
        const auto file = out_dir / name.str();
        std::ofstream out(file);
        write_curve_csv(path[k], out);
        if (!out) throw Error("cannot write " + file.string());
        result.files.push_back(file);
    }
    const auto summary = out_dir / "summary.csv";
    std::ofstream out(summary);
    out << "k,segment_energy\n" << std::setprecision(17);
    for (int k = 1; k <= steps; ++k) out << k << ',' << result.segment_energies[k - 1] << '\n';
    if (!out) throw Error("cannot write " + summary.string());
    result.files.push_back(summary);
    return result;
}

}  // namespace dgc
