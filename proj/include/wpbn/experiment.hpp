// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpbn/analysis.hpp"
#include "wpbn/montecarlo.hpp"

namespace wpbn {

/// Malformed or inconsistent experiment file; message carries
/// file:line/field context.
class SpecError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    coverage, // coverage probability / capacity vs swept parameter
    power,    // mean received power vs swept parameter
};

/// One experiment file: a base scenario, the parameter sweep, and the
/// analytic methods / simulation models to run per sweep value.  See the
/// README for the file grammar.
struct ExperimentSpec {
    std::string name;
    ExperimentKind kind = ExperimentKind::coverage;
    NetworkConfig base;
    std::vector<std::string> methods; // analytic routes (tokens)
    std::vector<std::string> models;  // simulation models / power scopes
    std::string sweep_parameter;      // lambda_p | lambda_b | theta_db | np
    std::vector<double> sweep_values;
    double theta_db = 0.0; // fixed threshold when not swept
    long trials = 2000;
    Seed seed = 1;
    double area = 100.0; // m^2, capacity normalization
    std::string output_dir = ".";
    std::string plot_metric = "coverage"; // coverage | capacity | both | power
    SimControls sim;
    AnalysisBudget budget;
    int fading_draws = 8; // fading redraws per realization in power simulations
};

/// Parse and fully validate an experiment file; defaults are filled for
/// every omitted key.  Throws SpecError with line/field diagnostics.
ExperimentSpec load_spec(const std::string& path);

struct SweepRow {
    double value = 0.0;      // swept parameter value
    std::string method;      // method or model token
    double metric = 0.0;     // coverage (or power in power experiments)
    double metric_ci = 0.0;
    double capacity = 0.0;   // coverage experiments only
    double capacity_ci = 0.0;
    std::string status = "ok";
    double wall_time_s = 0.0;
};

struct SweepResult {
    ExperimentSpec spec;
    std::vector<SweepRow> rows;
    bool any_cell_failed = false;
    bool timing = false; // whether wall_time_s is emitted in the CSV
};

struct RunOptions {
    bool run_methods = true;
    bool run_models = true;
    bool timing = false; // record wall_time_s in the CSV (off by default so
                         // reruns are byte-identical)
    std::optional<Seed> seed_override;
    std::optional<long> trials_override;
    std::optional<std::string> output_dir_override;
};

/// Execute every (sweep value x method/model) cell in deterministic sweep
/// order.  Per-cell numerical failures are recorded in the row status and
/// the run continues.  Cell c draws its seeds from (spec seed, c), so a
/// rerun with the same spec and seed reproduces the result exactly.
SweepResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// CSV serialization with shortest round-trip float formatting, LF line
/// endings and a fixed header per experiment kind (see README).
std::string to_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);

/// Self-contained SVG line plot of one metric ("coverage", "capacity" or
/// "power") vs the swept parameter, one series per method/model, shaded
/// confidence bands for simulated series.  Throws SpecError when the result
/// holds no plottable rows.
std::string to_svg(const SweepResult& result, const std::string& metric);
void write_svg(const SweepResult& result, const std::string& metric, const std::string& path);

/// Convenience wrapper used by the CLI: run, then persist
/// <output_dir>/<name>.csv and the plots requested by plot_metric.
/// Returns the persisted result.
SweepResult run_and_persist(const ExperimentSpec& spec, const RunOptions& opts = {});

} // namespace wpbn
