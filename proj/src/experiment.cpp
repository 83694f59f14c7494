// SPDX-License-Identifier: Apache-2.0
#include "wpbn/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wpbn/errors.hpp"
#include "wpbn/units.hpp"

namespace wpbn {

namespace {

const std::vector<std::string> kCoverageMethods = {
    "theorem1",      "corollary1", "corollary2", "corollary3",
    "corollary4_np", "corollary4_all", "corollary5", "theorem2",
};
const std::vector<std::string> kPowerMethods = {"lemma1", "lemma2"};
const std::vector<std::string> kPowerScopes = {"np_nearest", "all_pbs"};
const std::vector<std::string> kSweepParameters = {"lambda_p", "lambda_b", "theta_db", "np"};

bool contains(const std::vector<std::string>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string trim(std::string_view s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

/// Shortest round-trip decimal representation.
std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class SpecParser {
  public:
    explicit SpecParser(const std::string& path) : path_(path) {}

    ExperimentSpec parse()
    {
        std::ifstream in(path_);
        if (!in) {
            throw SpecError(path_ + ": cannot open experiment file");
        }

        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            std::string line = raw;
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            if (line.front() == '[') {
                open_section(line);
                continue;
            }
            handle_line(line);
        }
        finalize();
        return spec_;
    }

  private:
    [[noreturn]] void fail(const std::string& message) const
    {
        throw SpecError(path_ + ":" + std::to_string(line_) + ": " + message);
    }

    void open_section(const std::string& line)
    {
        if (line.back() != ']') {
            fail("malformed section header '" + line + "'");
        }
        section_ = trim(line.substr(1, line.size() - 2));
        static const std::vector<std::string> known = {"config", "sim", "budget",
                                                       "sweep",  "methods", "models"};
        if (!contains(known, section_)) {
            fail("unknown section [" + section_ + "]");
        }
    }

    void handle_line(const std::string& line)
    {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (section_ == "methods") {
                spec_.methods.push_back(trim(line));
                return;
            }
            if (section_ == "models") {
                spec_.models.push_back(trim(line));
                return;
            }
            fail("expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail("empty key or value");
        }
        set_key(key, value);
    }

    double number(const std::string& key, const std::string& value) const
    {
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) {
                fail("trailing characters in value for '" + key + "'");
            }
            return v;
        } catch (const std::invalid_argument&) {
            fail("value for '" + key + "' is not a number: '" + value + "'");
        } catch (const std::out_of_range&) {
            fail("value for '" + key + "' is out of range: '" + value + "'");
        }
    }

    long integer(const std::string& key, const std::string& value) const
    {
        const double v = number(key, value);
        if (std::floor(v) != v) {
            fail("value for '" + key + "' must be an integer");
        }
        return static_cast<long>(v);
    }

    std::vector<double> number_list(const std::string& key, const std::string& value) const
    {
        std::vector<double> out;
        std::istringstream iss(value);
        std::string tok;
        while (iss >> tok) {
            out.push_back(number(key, tok));
        }
        if (out.empty()) {
            fail("'" + key + "' needs at least one value");
        }
        return out;
    }

    void set_key(const std::string& key, const std::string& value)
    {
        if (section_.empty()) {
            if (key == "name") {
                spec_.name = value;
            } else if (key == "kind") {
                if (value == "coverage") {
                    spec_.kind = ExperimentKind::coverage;
                } else if (value == "power") {
                    spec_.kind = ExperimentKind::power;
                } else {
                    fail("kind must be 'coverage' or 'power'");
                }
            } else if (key == "seed") {
                spec_.seed = static_cast<Seed>(integer(key, value));
            } else if (key == "trials") {
                spec_.trials = integer(key, value);
            } else if (key == "area") {
                spec_.area = number(key, value);
            } else if (key == "theta_db") {
                spec_.theta_db = number(key, value);
            } else if (key == "plot") {
                spec_.plot_metric = value;
            } else if (key == "output_dir") {
                spec_.output_dir = value;
            } else {
                fail("unknown top-level key '" + key + "'");
            }
            return;
        }
        if (section_ == "config") {
            auto& c = spec_.base;
            if (key == "lambda_p") c.lambda_p = number(key, value);
            else if (key == "lambda_b") c.lambda_b = number(key, value);
            else if (key == "pc_watts") c.pc_watts = number(key, value);
            else if (key == "pc_dbm") c.pc_watts = dbm_to_watts(number(key, value));
            else if (key == "beta") c.beta = number(key, value);
            else if (key == "d00") c.d00 = number(key, value);
            else if (key == "n0_watts") c.n0_watts = number(key, value);
            else if (key == "n0_db") c.n0_watts = db_to_linear(number(key, value));
            else if (key == "alpha") c.alpha_f = c.alpha_b = number(key, value);
            else if (key == "alpha_f") c.alpha_f = number(key, value);
            else if (key == "alpha_b") c.alpha_b = number(key, value);
            else if (key == "np") c.np = static_cast<int>(integer(key, value));
            else fail("unknown [config] key '" + key + "'");
            return;
        }
        if (section_ == "sim") {
            if (key == "window_radius") spec_.sim.window_radius = number(key, value);
            else if (key == "pb_window_margin") spec_.sim.pb_window_margin = number(key, value);
            else if (key == "threads") spec_.sim.threads = static_cast<int>(integer(key, value));
            else if (key == "fading_draws") fading_draws_ = static_cast<int>(integer(key, value));
            else fail("unknown [sim] key '" + key + "'");
            return;
        }
        if (section_ == "budget") {
            if (key == "expectation_samples") spec_.budget.expectation_samples = integer(key, value);
            else if (key == "outer_samples") spec_.budget.outer_samples = integer(key, value);
            else if (key == "quadrature_tol") spec_.budget.quadrature_tol = number(key, value);
            else fail("unknown [budget] key '" + key + "'");
            return;
        }
        if (section_ == "sweep") {
            if (key == "parameter") spec_.sweep_parameter = value;
            else if (key == "values") spec_.sweep_values = number_list(key, value);
            else fail("unknown [sweep] key '" + key + "'");
            return;
        }
        fail("key '" + key + "' not allowed in section [" + section_ + "]");
    }

    void finalize()
    {
        line_ = 0; // constraint errors below are file-level, not line-level
        if (spec_.name.empty()) {
            throw SpecError(path_ + ": missing 'name'");
        }
        if (spec_.sweep_parameter.empty() || spec_.sweep_values.empty()) {
            throw SpecError(path_ + ": a [sweep] section with 'parameter' and 'values' is required");
        }
        if (!contains(kSweepParameters, spec_.sweep_parameter)) {
            throw SpecError(path_ + ": unknown sweep parameter '" + spec_.sweep_parameter + "'");
        }
        if (spec_.trials < 1) {
            throw SpecError(path_ + ": trials must be >= 1");
        }
        if (!(spec_.area > 0.0)) {
            throw SpecError(path_ + ": area must be > 0");
        }
        try {
            spec_.base.validate();
        } catch (const ConfigError& e) {
            throw SpecError(path_ + ": [config] " + e.what());
        }
        validate_sweep_values();
        validate_tokens();
        spec_.fading_draws = fading_draws_;
    }

    void validate_sweep_values() const
    {
        for (double v : spec_.sweep_values) {
            if (!std::isfinite(v)) {
                throw SpecError(path_ + ": sweep values must be finite");
            }
            if ((spec_.sweep_parameter == "lambda_p" || spec_.sweep_parameter == "lambda_b") &&
                !(v > 0.0)) {
                throw SpecError(path_ + ": swept " + spec_.sweep_parameter + " must be > 0");
            }
            if (spec_.sweep_parameter == "np" && (std::floor(v) != v || v < 1.0)) {
                throw SpecError(path_ + ": swept np values must be integers >= 1");
            }
        }
    }

    void validate_tokens() const
    {
        const bool coverage = spec_.kind == ExperimentKind::coverage;
        const auto& methods = coverage ? kCoverageMethods : kPowerMethods;
        for (const auto& m : spec_.methods) {
            if (!contains(methods, m)) {
                throw SpecError(path_ + ": method '" + m + "' is not valid for a " +
                                (coverage ? "coverage" : "power") + " experiment");
            }
        }
        for (const auto& m : spec_.models) {
            if (coverage) {
                if (!power_model_from_string(m)) {
                    throw SpecError(path_ + ": unknown simulation model '" + m + "'");
                }
            } else if (!contains(kPowerScopes, m)) {
                throw SpecError(path_ + ": power experiments simulate 'np_nearest' or 'all_pbs', got '" +
                                m + "'");
            }
        }
        if (spec_.methods.empty() && spec_.models.empty()) {
            throw SpecError(path_ + ": nothing to run, list at least one method or model");
        }

        const bool single_source_route = contains(spec_.methods, "corollary1") ||
                                         contains(spec_.methods, "corollary2");
        if (single_source_route) {
            const bool np_swept_beyond_one =
                spec_.sweep_parameter == "np" &&
                std::any_of(spec_.sweep_values.begin(), spec_.sweep_values.end(),
                            [](double v) { return v != 1.0; });
            if (spec_.base.np != 1 || np_swept_beyond_one) {
                throw SpecError(path_ +
                                ": corollary1/corollary2 require np = 1 (single nearest source)");
            }
            if (spec_.base.alpha_f != spec_.base.alpha_b) {
                throw SpecError(path_ + ": corollary1/corollary2 require alpha_f = alpha_b");
            }
        }
    }

    std::string path_;
    long line_ = 0;
    std::string section_;
    int fading_draws_ = 8;
    ExperimentSpec spec_;
};

NetworkConfig config_for_value(const ExperimentSpec& spec, double value)
{
    NetworkConfig cfg = spec.base;
    if (spec.sweep_parameter == "lambda_p") {
        cfg.lambda_p = value;
    } else if (spec.sweep_parameter == "lambda_b") {
        cfg.lambda_b = value;
    } else if (spec.sweep_parameter == "np") {
        cfg.np = static_cast<int>(value);
    }
    return cfg;
}

SweepRow run_coverage_cell(const ExperimentSpec& spec, const std::string& token, bool is_method,
                           const NetworkConfig& cfg, double theta, long trials, Seed cell_seed)
{
    SweepRow row;
    CoverageEstimate cov;
    if (is_method) {
        if (token == "theorem1") {
            cov = coverage_theorem1(cfg, theta, spec.budget, cell_seed);
        } else if (token == "corollary1") {
            cov = coverage_corollary1(cfg, theta, spec.budget.quadrature_tol);
        } else if (token == "corollary2") {
            cov = coverage_corollary2(cfg, theta, spec.budget.quadrature_tol);
        } else if (token == "corollary3") {
            cov = coverage_corollary3(cfg, theta, spec.budget, cell_seed);
        } else if (token == "corollary4_np") {
            const double pbar =
                mean_power_np_nearest(cfg, spec.budget.expectation_samples, derive_seed(cell_seed, 1))
                    .watts;
            cov = coverage_corollary4(cfg, theta, pbar);
        } else if (token == "corollary4_all") {
            cov = coverage_corollary4(cfg, theta, mean_power_all_pbs(cfg));
        } else if (token == "corollary5") {
            cov = coverage_corollary5(cfg, theta);
        } else if (token == "theorem2") {
            cov = coverage_theorem2(cfg, theta);
        } else {
            throw ConfigError("unknown method token '" + token + "'");
        }
    } else {
        const auto model = power_model_from_string(token);
        if (!model) {
            throw ConfigError("unknown model token '" + token + "'");
        }
        cov = estimate_coverage(cfg, *model, theta, trials, spec.sim, cell_seed);
    }
    const CapacityEstimate cap = capacity(cfg, cov, spec.area);
    row.metric = cov.value;
    row.metric_ci = cov.abs_uncertainty;
    row.capacity = cap.value;
    row.capacity_ci = cap.abs_uncertainty;
    return row;
}

SweepRow run_power_cell(const ExperimentSpec& spec, const std::string& token, bool is_method,
                        const NetworkConfig& cfg, long trials, Seed cell_seed)
{
    SweepRow row;
    MeanPowerEstimate est;
    if (is_method) {
        if (token == "lemma1") {
            est = mean_power_np_nearest(cfg, spec.budget.expectation_samples, cell_seed);
        } else if (token == "lemma2") {
            est = MeanPowerEstimate{mean_power_all_pbs(cfg), 0.0};
        } else {
            throw ConfigError("unknown method token '" + token + "'");
        }
    } else {
        const HarvestScope scope =
            token == "np_nearest" ? HarvestScope::np_nearest : HarvestScope::all_pbs;
        est = estimate_mean_power(cfg, scope, trials, spec.sim, cell_seed, spec.fading_draws);
    }
    row.metric = est.watts;
    row.metric_ci = est.std_error;
    return row;
}

std::string sanitize_status(std::string s)
{
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return s;
}

} // namespace

ExperimentSpec load_spec(const std::string& path)
{
    return SpecParser(path).parse();
}

SweepResult run_experiment(const ExperimentSpec& spec_in, const RunOptions& opts)
{
    ExperimentSpec spec = spec_in;
    if (opts.seed_override) {
        spec.seed = *opts.seed_override;
    }
    if (opts.trials_override) {
        spec.trials = *opts.trials_override;
    }
    if (opts.output_dir_override) {
        spec.output_dir = *opts.output_dir_override;
    }

    SweepResult result;
    result.spec = spec;

    std::uint64_t cell_index = 0;
    for (double value : spec.sweep_values) {
        const NetworkConfig cfg = config_for_value(spec, value);
        const double theta_db = spec.sweep_parameter == "theta_db" ? value : spec.theta_db;
        const double theta = db_to_linear(theta_db);

        auto run_cell = [&](const std::string& token, bool is_method) {
            const Seed cell_seed = derive_seed(spec.seed, cell_index++);
            const auto start = std::chrono::steady_clock::now();
            SweepRow row;
            try {
                row = spec.kind == ExperimentKind::coverage
                          ? run_coverage_cell(spec, token, is_method, cfg, theta, spec.trials,
                                              cell_seed)
                          : run_power_cell(spec, token, is_method, cfg, spec.trials, cell_seed);
            } catch (const NumericalError& e) {
                row.status = "error:numerical";
                result.any_cell_failed = true;
                (void)e;
            } catch (const RealizationInfeasible&) {
                row.status = "error:numerical";
                result.any_cell_failed = true;
            } catch (const ConfigError&) {
                row.status = "error:config";
                result.any_cell_failed = true;
            }
            row.value = value;
            row.method = token;
            row.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            result.rows.push_back(std::move(row));
        };

        if (opts.run_methods) {
            for (const auto& m : spec.methods) {
                run_cell(m, true);
            }
        }
        if (opts.run_models) {
            for (const auto& m : spec.models) {
                run_cell(m, false);
            }
        }
    }

    if (result.rows.empty()) {
        throw ConfigError("experiment '" + spec.name + "' produced no cells; check methods/models "
                          "against the analyze/simulate mode");
    }
    result.timing = opts.timing;
    return result;
}

std::string to_csv(const SweepResult& result)
{
    const bool coverage = result.spec.kind == ExperimentKind::coverage;
    std::string out;
    out += coverage ? "swept_param,value,method,coverage,coverage_ci,capacity,capacity_ci,status,"
                      "wall_time_s\n"
                    : "swept_param,value,method,power_w,power_ci,status,wall_time_s\n";
    for (const auto& row : result.rows) {
        const bool ok = row.status == "ok";
        out += result.spec.sweep_parameter;
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += row.method;
        out += ',';
        out += ok ? format_double(row.metric) : std::string();
        out += ',';
        out += ok ? format_double(row.metric_ci) : std::string();
        out += ',';
        if (coverage) {
            out += ok ? format_double(row.capacity) : std::string();
            out += ',';
            out += ok ? format_double(row.capacity_ci) : std::string();
            out += ',';
        }
        out += sanitize_status(row.status);
        out += ',';
        if (result.timing) {
            out += format_double(row.wall_time_s);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const SweepResult& result, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << to_csv(result);
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

SweepResult run_and_persist(const ExperimentSpec& spec, const RunOptions& opts)
{
    SweepResult result = run_experiment(spec, opts);
    namespace fs = std::filesystem;
    const fs::path dir(result.spec.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
    }

    write_csv(result, (dir / (result.spec.name + ".csv")).string());

    const std::string& metric = result.spec.plot_metric;
    if (metric == "coverage" || metric == "power" || metric == "both") {
        const std::string m = result.spec.kind == ExperimentKind::power ? "power" : "coverage";
        write_svg(result, m, (dir / (result.spec.name + ".svg")).string());
    }
    if ((metric == "capacity" || metric == "both") &&
        result.spec.kind == ExperimentKind::coverage) {
        write_svg(result, "capacity", (dir / (result.spec.name + "_capacity.svg")).string());
    }
    return result;
}

} // namespace wpbn
