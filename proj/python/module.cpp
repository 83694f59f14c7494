// SPDX-License-Identifier: Apache-2.0
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wpbn/analysis.hpp"
#include "wpbn/channel.hpp"
#include "wpbn/errors.hpp"
#include "wpbn/montecarlo.hpp"
#include "wpbn/pointprocess.hpp"
#include "wpbn/specfun.hpp"
#include "wpbn/units.hpp"

namespace py = pybind11;
using namespace wpbn;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Stochastic-geometry coverage and capacity evaluation for wirelessly "
              "powered backscatter networks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<RealizationInfeasible>(m, "RealizationInfeasible", PyExc_RuntimeError);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init([](double lambda_p, double lambda_b, double pc_watts, double beta,
                         double d00, double n0_watts, double alpha_f, double alpha_b, int np) {
                 NetworkConfig cfg{lambda_p, lambda_b, pc_watts, beta, d00,
                                   n0_watts, alpha_f,  alpha_b,  np};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("lambda_p") = 0.1, py::arg("lambda_b") = 0.01, py::arg("pc_watts") = 10.0,
             py::arg("beta") = 0.5, py::arg("d00") = 1.0, py::arg("n0_watts") = 1e-4,
             py::arg("alpha_f") = 4.0, py::arg("alpha_b") = 4.0, py::arg("np") = 1)
        .def_readwrite("lambda_p", &NetworkConfig::lambda_p)
        .def_readwrite("lambda_b", &NetworkConfig::lambda_b)
        .def_readwrite("pc_watts", &NetworkConfig::pc_watts)
        .def_readwrite("beta", &NetworkConfig::beta)
        .def_readwrite("d00", &NetworkConfig::d00)
        .def_readwrite("n0_watts", &NetworkConfig::n0_watts)
        .def_readwrite("alpha_f", &NetworkConfig::alpha_f)
        .def_readwrite("alpha_b", &NetworkConfig::alpha_b)
        .def_readwrite("np", &NetworkConfig::np)
        .def("validate", &NetworkConfig::validate)
        .def("__repr__", [](const NetworkConfig& c) {
            return "NetworkConfig(lambda_p=" + std::to_string(c.lambda_p) +
                   ", lambda_b=" + std::to_string(c.lambda_b) + ", np=" + std::to_string(c.np) +
                   ")";
        });

    py::enum_<Method>(m, "Method")
        .value("theorem1", Method::theorem1)
        .value("corollary1", Method::corollary1)
        .value("corollary2", Method::corollary2)
        .value("corollary3", Method::corollary3)
        .value("corollary4", Method::corollary4)
        .value("corollary5", Method::corollary5)
        .value("theorem2", Method::theorem2)
        .value("simulation", Method::simulation);

    py::enum_<PowerModel>(m, "PowerModel")
        .value("instantaneous_np_nearest", PowerModel::instantaneous_np_nearest)
        .value("mean_np_nearest", PowerModel::mean_np_nearest)
        .value("fixed_mean_np_nearest", PowerModel::fixed_mean_np_nearest)
        .value("instantaneous_all_pbs", PowerModel::instantaneous_all_pbs)
        .value("mean_all_pbs", PowerModel::mean_all_pbs)
        .value("regular_powered", PowerModel::regular_powered);

    py::enum_<HarvestScope>(m, "HarvestScope")
        .value("np_nearest", HarvestScope::np_nearest)
        .value("all_pbs", HarvestScope::all_pbs);

    py::class_<CoverageEstimate>(m, "CoverageEstimate")
        .def_readonly("value", &CoverageEstimate::value)
        .def_readonly("abs_uncertainty", &CoverageEstimate::abs_uncertainty)
        .def_readonly("method", &CoverageEstimate::method)
        .def_readonly("theta", &CoverageEstimate::theta)
        .def("__repr__", [](const CoverageEstimate& c) {
            return "CoverageEstimate(" + std::to_string(c.value) + " +- " +
                   std::to_string(c.abs_uncertainty) + ", " + to_string(c.method) + ")";
        });

    py::class_<CapacityEstimate>(m, "CapacityEstimate")
        .def_readonly("value", &CapacityEstimate::value)
        .def_readonly("abs_uncertainty", &CapacityEstimate::abs_uncertainty);

    py::class_<MeanPowerEstimate>(m, "MeanPowerEstimate")
        .def_readonly("watts", &MeanPowerEstimate::watts)
        .def_readonly("std_error", &MeanPowerEstimate::std_error)
        .def("__repr__", [](const MeanPowerEstimate& p) {
            return "MeanPowerEstimate(" + std::to_string(p.watts) + " W +- " +
                   std::to_string(p.std_error) + ")";
        });

    py::class_<ExpectationEstimate>(m, "ExpectationEstimate")
        .def_readonly("value", &ExpectationEstimate::value)
        .def_readonly("std_error", &ExpectationEstimate::std_error)
        .def_readonly("samples", &ExpectationEstimate::samples);

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("value", &QuadratureResult::value)
        .def_readonly("abs_error_estimate", &QuadratureResult::abs_error_estimate)
        .def_readonly("evaluations", &QuadratureResult::evaluations);

    py::class_<AnalysisBudget>(m, "AnalysisBudget")
        .def(py::init<>())
        .def_readwrite("expectation_samples", &AnalysisBudget::expectation_samples)
        .def_readwrite("outer_samples", &AnalysisBudget::outer_samples)
        .def_readwrite("quadrature_tol", &AnalysisBudget::quadrature_tol);

    py::class_<SimControls>(m, "SimControls")
        .def(py::init<>())
        .def_readwrite("window_radius", &SimControls::window_radius)
        .def_readwrite("pb_window_margin", &SimControls::pb_window_margin)
        .def_readwrite("threads", &SimControls::threads);

    // Point processes.
    m.def(
        "sample_ppp",
        [](double density, double window_radius, Seed seed) {
            const PointSet2D set = sample_ppp(density, window_radius, seed);
            std::vector<std::pair<double, double>> out;
            out.reserve(set.points.size());
            for (const auto& p : set.points) {
                out.emplace_back(p.x, p.y);
            }
            return out;
        },
        py::arg("density"), py::arg("window_radius"), py::arg("seed"),
        "Homogeneous PPP on a disk; returns a list of (x, y) pairs.");
    m.def(
        "sample_ordered_nearest",
        [](double density, int count, Seed seed) {
            return sample_ordered_nearest(density, count, seed).values;
        },
        py::arg("density"), py::arg("count"), py::arg("seed"),
        "Ascending nearest-neighbor distances of a PPP seen from a point.");
    m.def(
        "joint_distance_pdf",
        [](const std::vector<double>& distances, double density) {
            return joint_distance_pdf(OrderedDistances{distances}, density);
        },
        py::arg("distances"), py::arg("density"));

    // Special functions.
    m.def("expint_ei", &expint_ei, py::arg("z"), "Exponential integral Ei(z).");
    m.def("integrate_semi_infinite", &integrate_semi_infinite, py::arg("f"), py::arg("lower"),
          py::arg("tol"), "Adaptive quadrature of f over [lower, inf).");
    m.def("ordered_distance_expectation", &ordered_distance_expectation, py::arg("density"),
          py::arg("np"), py::arg("alpha_f"), py::arg("exponent_outer"), py::arg("samples"),
          py::arg("seed"));

    // Analytic evaluators.
    m.def("mean_power_np_nearest", &mean_power_np_nearest, py::arg("cfg"),
          py::arg("samples") = 100000, py::arg("seed") = 1);
    m.def("mean_power_all_pbs", &mean_power_all_pbs, py::arg("cfg"));
    m.def("coverage_theorem1", &coverage_theorem1, py::arg("cfg"), py::arg("theta"),
          py::arg("budget") = AnalysisBudget{}, py::arg("seed") = 1);
    m.def("coverage_corollary1", &coverage_corollary1, py::arg("cfg"), py::arg("theta"),
          py::arg("tol") = 1e-8);
    m.def("coverage_corollary2", &coverage_corollary2, py::arg("cfg"), py::arg("theta"),
          py::arg("tol") = 1e-8);
    m.def("coverage_corollary3", &coverage_corollary3, py::arg("cfg"), py::arg("theta"),
          py::arg("budget") = AnalysisBudget{}, py::arg("seed") = 1);
    m.def("coverage_corollary4", &coverage_corollary4, py::arg("cfg"), py::arg("theta"),
          py::arg("pbar_watts"));
    m.def("coverage_corollary5", &coverage_corollary5, py::arg("cfg"), py::arg("theta"));
    m.def("coverage_theorem2", &coverage_theorem2, py::arg("cfg"), py::arg("theta"));
    m.def("capacity", &capacity, py::arg("cfg"), py::arg("coverage"), py::arg("area") = 100.0);

    // Simulation.
    m.def("estimate_coverage", &estimate_coverage, py::arg("cfg"), py::arg("model"),
          py::arg("theta"), py::arg("trials"), py::arg("sim") = SimControls{},
          py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("estimate_capacity", &estimate_capacity, py::arg("cfg"), py::arg("model"),
          py::arg("theta"), py::arg("trials"), py::arg("sim") = SimControls{},
          py::arg("area") = 100.0, py::arg("seed") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_sinr_values", &sample_sinr_values, py::arg("cfg"), py::arg("model"),
          py::arg("trials"), py::arg("sim") = SimControls{}, py::arg("seed") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("estimate_mean_power", &estimate_mean_power, py::arg("cfg"), py::arg("scope"),
          py::arg("trials"), py::arg("sim") = SimControls{}, py::arg("seed") = 1,
          py::arg("fading_draws") = 1, py::call_guard<py::gil_scoped_release>());

    // Unit helpers.
    m.def("db_to_linear", &db_to_linear, py::arg("db"));
    m.def("linear_to_db", &linear_to_db, py::arg("x"));
    m.def("dbm_to_watts", &dbm_to_watts, py::arg("dbm"));
}
