# SPDX-License-Identifier: Apache-2.0
"""Stochastic-geometry coverage and capacity evaluation for wirelessly
powered backscatter networks.

The heavy lifting lives in the C++ extension module ``wpbn._core``; this
package re-exports its public surface.
"""

from ._core import (  # noqa: F401
    AnalysisBudget,
    CapacityEstimate,
    ConfigError,
    CoverageEstimate,
    ExpectationEstimate,
    HarvestScope,
    MeanPowerEstimate,
    Method,
    NetworkConfig,
    NumericalError,
    PowerModel,
    QuadratureResult,
    RealizationInfeasible,
    SimControls,
    capacity,
    coverage_corollary1,
    coverage_corollary2,
    coverage_corollary3,
    coverage_corollary4,
    coverage_corollary5,
    coverage_theorem1,
    coverage_theorem2,
    db_to_linear,
    dbm_to_watts,
    estimate_capacity,
    estimate_coverage,
    estimate_mean_power,
    expint_ei,
    integrate_semi_infinite,
    joint_distance_pdf,
    linear_to_db,
    mean_power_all_pbs,
    mean_power_np_nearest,
    ordered_distance_expectation,
    sample_ordered_nearest,
    sample_ppp,
    sample_sinr_values,
)

__version__ = "0.1.0"
