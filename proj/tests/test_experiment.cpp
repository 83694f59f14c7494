// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "wpbn/experiment.hpp"

using namespace wpbn;
namespace fs = std::filesystem;

namespace {

fs::path write_spec(const std::string& name, const std::string& body)
{
    const fs::path dir = fs::temp_directory_path() / "wpbn_spec_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

const char* kMinimalSpec = R"(name = minimal
[sweep]
parameter = theta_db
values = -5 0 5
[methods]
corollary5
)";

} // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("minimal experiment picks up the defaults")
{
    const ExperimentSpec spec = load_spec(write_spec("minimal.exp", kMinimalSpec).string());
    CHECK(spec.name == "minimal");
    CHECK(spec.kind == ExperimentKind::coverage);
    CHECK(spec.base.pc_watts == doctest::Approx(10.0)); // 40 dBm
    CHECK(spec.base.beta == 0.5);
    CHECK(spec.base.d00 == 1.0);
    CHECK(spec.base.n0_watts == doctest::Approx(1e-4)); // -40 dB
    CHECK(spec.base.alpha_f == 4.0);
    CHECK(spec.base.alpha_b == 4.0);
    CHECK(spec.base.np == 1);
    CHECK(spec.sweep_values.size() == 3);
}

TEST_CASE("load-time validation names the problem")
{
    const auto expect_error = [](const std::string& name, const std::string& body,
                                 const std::string& needle) {
        const fs::path p = write_spec(name, body);
        try {
            (void)load_spec(p.string());
            FAIL("expected SpecError for " << name);
        } catch (const SpecError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_error("cor1_np2.exp",
                 "name = x\n[config]\nnp = 2\n[sweep]\nparameter = theta_db\nvalues = 0\n"
                 "[methods]\ncorollary1\n",
                 "np = 1");
    expect_error("lb_zero.exp",
                 "name = x\n[config]\nlambda_b = 0\n[sweep]\nparameter = theta_db\nvalues = 0\n"
                 "[methods]\ncorollary5\n",
                 "lambda_b");
    expect_error("bad_key.exp", "name = x\nwat = 1\n", ":2:");
    expect_error("bad_method.exp",
                 "name = x\n[sweep]\nparameter = theta_db\nvalues = 0\n[methods]\nlemma1\n",
                 "lemma1");
    expect_error("no_cells.exp", "name = x\n[sweep]\nparameter = theta_db\nvalues = 0\n",
                 "nothing to run");
    expect_error("bad_sweep.exp",
                 "name = x\n[sweep]\nparameter = wat\nvalues = 0\n[methods]\ncorollary5\n",
                 "sweep parameter");
    expect_error("missing.exp", "", "missing 'name'");
    CHECK_THROWS_AS((void)load_spec("/nonexistent/path.exp"), SpecError);
}

TEST_CASE("analytic sweep runs deterministically and serializes stably")
{
    const ExperimentSpec spec = load_spec(write_spec("minimal.exp", kMinimalSpec).string());
    const SweepResult a = run_experiment(spec);
    const SweepResult b = run_experiment(spec);
    REQUIRE(a.rows.size() == 3);
    CHECK(!a.any_cell_failed);
    CHECK(to_csv(a) == to_csv(b));

    const std::string csv = to_csv(a);
    CHECK(csv.rfind("swept_param,value,method,coverage,coverage_ci,capacity,capacity_ci,status,"
                    "wall_time_s\n",
                    0) == 0);
    CHECK(csv.find("theta_db,-5,corollary5,") != std::string::npos);
    CHECK(csv.find(",ok,") != std::string::npos);
    // Coverage is nonincreasing in the threshold.
    CHECK(a.rows[0].metric >= a.rows[1].metric);
    CHECK(a.rows[1].metric >= a.rows[2].metric);
    // Capacity column is lambda_b * coverage * area.
    CHECK(a.rows[0].capacity ==
          doctest::Approx(a.rows[0].metric * spec.base.lambda_b * spec.area).epsilon(1e-12));
}

TEST_CASE("power experiments use the power header and the closed form")
{
    const char* body = R"(name = powersweep
kind = power
[sweep]
parameter = lambda_p
values = 0.05 0.1 0.2
[methods]
lemma2
)";
    const ExperimentSpec spec = load_spec(write_spec("power.exp", body).string());
    const SweepResult r = run_experiment(spec);
    REQUIRE(r.rows.size() == 3);
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("swept_param,value,method,power_w,power_ci,status,wall_time_s\n", 0) == 0);
    for (const auto& row : r.rows) {
        NetworkConfig cfg = spec.base;
        cfg.lambda_p = row.value;
        CHECK(row.metric == doctest::Approx(mean_power_all_pbs(cfg)).epsilon(1e-14));
        CHECK(row.metric_ci == 0.0);
    }
}

TEST_CASE("simulation cells run and keep both method and model rows ordered")
{
    const char* body = R"(name = mixed
seed = 5
trials = 60
[config]
lambda_b = 0.005
[sim]
window_radius = 40
pb_window_margin = 15
[sweep]
parameter = theta_db
values = 0 5
[methods]
corollary5
[models]
mean_np_nearest
)";
    const ExperimentSpec spec = load_spec(write_spec("mixed.exp", body).string());
    const SweepResult r = run_experiment(spec);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].method == "corollary5");
    CHECK(r.rows[1].method == "mean_np_nearest");
    CHECK(r.rows[2].method == "corollary5");
    CHECK(r.rows[2].value == 5.0);

    // analyze/simulate subsets select the matching rows only.
    RunOptions methods_only;
    methods_only.run_models = false;
    CHECK(run_experiment(spec, methods_only).rows.size() == 2);
    RunOptions models_only;
    models_only.run_methods = false;
    CHECK(run_experiment(spec, models_only).rows.size() == 2);
}

TEST_CASE("per-cell failures are recorded and the run continues")
{
    // Sweeping lambda_p down to a value where the default margin cannot
    // hold the nearest source makes that cell fail while others succeed.
    const char* body = R"(name = partial
trials = 30
[sim]
window_radius = 30
[sweep]
parameter = lambda_p
values = 0.0001 0.1
[models]
mean_np_nearest
)";
    const ExperimentSpec spec = load_spec(write_spec("partial.exp", body).string());
    const SweepResult r = run_experiment(spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].status == "error:config");
    CHECK(r.rows[1].status == "ok");
    CHECK(r.any_cell_failed);
    const std::string csv = to_csv(r);
    CHECK(csv.find("lambda_p,1e-04,mean_np_nearest,,,,,error:config,") != std::string::npos);
}

TEST_CASE("run_and_persist writes byte-identical CSVs on rerun")
{
    const fs::path out_dir = fs::temp_directory_path() / "wpbn_persist_test";
    fs::remove_all(out_dir);
    const std::string body =
        "output_dir = " + out_dir.string() + "\n" + std::string(kMinimalSpec);
    const ExperimentSpec spec = load_spec(write_spec("persist.exp", body).string());

    (void)run_and_persist(spec);
    const fs::path csv_path = out_dir / "minimal.csv";
    const fs::path svg_path = out_dir / "minimal.svg";
    REQUIRE(fs::exists(csv_path));
    REQUIRE(fs::exists(svg_path));

    std::ifstream first(csv_path, std::ios::binary);
    const std::string pass1((std::istreambuf_iterator<char>(first)), {});
    (void)run_and_persist(spec);
    std::ifstream second(csv_path, std::ios::binary);
    const std::string pass2((std::istreambuf_iterator<char>(second)), {});
    CHECK(pass1 == pass2);
    CHECK(!pass1.empty());
}

TEST_CASE("plots carry one legend entry per series")
{
    const char* body = R"(name = twoseries
[sweep]
parameter = theta_db
values = -5 0 5
[methods]
corollary5
theorem2
)";
    const ExperimentSpec spec = load_spec(write_spec("two.exp", body).string());
    const SweepResult r = run_experiment(spec);
    const std::string svg = to_svg(r, "coverage");
    CHECK(svg.find(">corollary5<") != std::string::npos);
    CHECK(svg.find(">theorem2<") != std::string::npos);
    CHECK(svg.find("<svg") == 0);

    SweepResult empty = r;
    for (auto& row : empty.rows) {
        row.status = "error:numerical";
    }
    CHECK_THROWS_AS((void)to_svg(empty, "coverage"), SpecError);
}

TEST_SUITE_END();
