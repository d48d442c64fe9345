#pragma once

#include "dgc/consistency.hpp"
#include "dgc/models/zoo.hpp"
#include "dgc/operators.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgc {

/// Invalid study configuration (CLI exit code 3).
struct ConfigError : Error {
    using Error::Error;
};

struct StudyConfig {
    std::string model = "sphere-chart";
    std::optional<Coord> xa, xb, w;  // model defaults when unset
    int k_min = 1;                   // K = 2^k for k in [k_min, k_max]
    int k_max = 10;
    SolverConfig solver;
    OpConfig op_config;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int rod_nodes = 16;
    double rod_delta = 0.1;

    void validate() const;
    std::vector<int> step_counts() const;
    ModelOptions model_options() const;
};

/// Reads the JSON config format: keys mirror StudyConfig (lower_snake_case),
/// with `k_exponents` as [min, max], `solver` and `op_config` as objects.
/// Throws ConfigError.
StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& cfg);

struct ConvergenceRow {
    int K = 0;
    double err_geo = 0.0;
    double err_log = 0.0;
    double err_exp = 0.0;
    double err_pt = 0.0;
};

struct FittedOrders {
    double geo = 0.0;
    double log = 0.0;
    double exp = 0.0;
    double pt = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;  // ascending K
    FittedOrders orders;
    std::string reference;
};

/// Thrown when an operator fails inside the study; carries (K, operator).
struct StudyFailure : Error {
    StudyFailure(int K, std::string op, const std::string& what)
        : Error("K=" + std::to_string(K) + " " + op + ": " + what), steps(K), op(std::move(op)) {}
    int steps;
    std::string op;
};

/// Error table of discrete geodesic, K LOG^K, EXP^K(v/K) and K P(w/K) against
/// the model's analytic oracle, or against the discrete solution at
/// 4 * K_max (self-convergence) when the model has none.
ConvergenceReport run_convergence_study(const StudyConfig& cfg);

/// Least-squares slope of log(err) against log(1/K). Nonpositive errors are
/// dropped (with a note appended to `warnings`); fewer than three remaining
/// throws PreconditionError.
double fit_order(const std::vector<double>& errors, const std::vector<int>& steps,
                 std::vector<std::string>* warnings = nullptr);

void write_report_csv(const ConvergenceReport& report, std::ostream& out);
ConvergenceReport read_report_csv(std::istream& in);
nlohmann::json orders_json(const FittedOrders& orders);

struct AuditReport {
    int samples = 0;
    int failures = 0;
    double worst_residual = 0.0;
    std::vector<ConsistencyReport> reports;
    bool passed() const { return failures == 0; }
};

/// check_consistency at `samples` seeded random admissible points.
AuditReport run_consistency_audit(const std::string& model_name, int samples, double tol, std::uint64_t seed = 0,
                                  const ModelOptions& options = {});

struct RodMorphResult {
    GeodesicResult geodesic;
    std::vector<double> segment_energies;  // K * W[x_{k-1}, x_k]
    std::vector<std::filesystem::path> files;
};

/// Discrete geodesic between two rod curves; writes curve_<k>.csv for
/// k = 0..K and summary.csv (k, segment_energy) into out_dir. Throws
/// ConvergenceError if the solve fails (the result is not written).
RodMorphResult run_rod_morph(const Coord& curve_a, const Coord& curve_b, int steps, RodEnergyKind kind,
                             const std::filesystem::path& out_dir, double delta = 0.1,
                             const SolverConfig& solver = {});

}  // namespace dgc
