// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner for the backscatter network evaluator.
//
//   wpbn analyze  <spec>   run the analytic methods of an experiment file
//   wpbn simulate <spec>   run the simulation models only
//   wpbn sweep    <spec>   run both
//   wpbn validate <spec>   parse and validate, run nothing
//
// Exit codes: 0 success, 1 spec/config error, 2 numerical failure in any
// cell, 3 I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wpbn/errors.hpp"
#include "wpbn/experiment.hpp"

namespace {

struct CliOptions {
    std::string spec_path;
    wpbn::RunOptions run;
};

void add_common(CLI::App* cmd, CliOptions& opts)
{
    cmd->add_option("spec", opts.spec_path, "experiment file")->required();
    cmd->add_option_function<long>(
           "--seed", [&](long s) { opts.run.seed_override = static_cast<wpbn::Seed>(s); },
           "override the experiment seed");
    cmd->add_option_function<long>(
           "--trials", [&](long t) { opts.run.trials_override = t; },
           "override the simulation trial count");
    cmd->add_option_function<std::string>(
           "--out", [&](const std::string& d) { opts.run.output_dir_override = d; },
           "override the output directory");
    cmd->add_flag("--timing", opts.run.timing,
                  "record wall_time_s in the CSV (off by default so reruns are byte-identical)");
}

int execute(const CliOptions& opts, bool methods, bool models, bool validate_only)
{
    wpbn::RunOptions run = opts.run;
    run.run_methods = methods;
    run.run_models = models;

    const wpbn::ExperimentSpec spec = wpbn::load_spec(opts.spec_path);
    if (validate_only) {
        const std::size_t cells =
            spec.sweep_values.size() * (spec.methods.size() + spec.models.size());
        std::cout << "OK: " << spec.name << " (" << spec.sweep_values.size() << " sweep values, "
                  << spec.methods.size() << " methods, " << spec.models.size() << " models, "
                  << cells << " cells)\n";
        return 0;
    }

    const wpbn::SweepResult result = wpbn::run_and_persist(spec, run);
    long failed = 0;
    for (const auto& row : result.rows) {
        if (row.status != "ok") {
            ++failed;
        }
    }
    std::cout << result.spec.name << ": " << result.rows.size() << " cells, " << failed
              << " failed -> " << result.spec.output_dir << "/" << result.spec.name << ".csv\n";
    return result.any_cell_failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coverage and capacity evaluation for wirelessly powered backscatter networks"};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* analyze = app.add_subcommand("analyze", "run the analytic methods of a spec");
    CLI::App* simulate = app.add_subcommand("simulate", "run the simulation models of a spec");
    CLI::App* sweep = app.add_subcommand("sweep", "run methods and models");
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a spec, run nothing");
    for (CLI::App* cmd : {analyze, simulate, sweep, validate}) {
        add_common(cmd, opts);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            return execute(opts, false, false, true);
        }
        if (analyze->parsed()) {
            return execute(opts, true, false, false);
        }
        if (simulate->parsed()) {
            return execute(opts, false, true, false);
        }
        return execute(opts, true, true, false);
    } catch (const wpbn::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 1;
    } catch (const wpbn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const wpbn::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        // Remaining failures out of run_and_persist are filesystem writes.
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
