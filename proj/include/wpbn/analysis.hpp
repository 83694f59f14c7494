// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "wpbn/rng.hpp"
#include "wpbn/specfun.hpp"

namespace wpbn {

/// Physical and geometric parameters of one scenario.
struct NetworkConfig {
    double lambda_p = 0.1;  // power-source density, per m^2
    double lambda_b = 0.01; // backscatter-node density, per m^2
    double pc_watts = 10.0; // source transmit power (40 dBm)
    double beta = 0.5;      // backscattering efficiency, (0, 1]
    double d00 = 1.0;       // node-to-receiver distance, m
    double n0_watts = 1e-4; // noise variance (-40 dB re 1 W)
    double alpha_f = 4.0;   // forward path loss exponent, > 2
    double alpha_b = 4.0;   // backward path loss exponent, > 2
    int np = 1;             // number of harvested nearest sources, >= 1

    /// Throws ConfigError naming the violated invariant.
    void validate() const;
};

/// Which evaluation route produced a coverage number.
enum class Method {
    theorem1,
    corollary1,
    corollary2,
    corollary3,
    corollary4,
    corollary5,
    theorem2,
    simulation,
};

const char* to_string(Method method);

struct CoverageEstimate {
    double value = 0.0;           // in [0, 1]
    double abs_uncertainty = 0.0; // 1-sigma for MC routes, quadrature error
                                  // for deterministic ones, Wilson 95% half
                                  // width for simulation
    Method method = Method::simulation;
    double theta = 0.0; // SINR threshold, linear
};

struct CapacityEstimate {
    double value = 0.0; // successful transmissions per chosen area
    double abs_uncertainty = 0.0;
};

struct MeanPowerEstimate {
    double watts = 0.0;
    double std_error = 0.0;
};

/// Sampling and quadrature controls for the analytic evaluators.
struct AnalysisBudget {
    long expectation_samples = 100000; // interference-side distance expectation
    long outer_samples = 100000;       // outer ordered-distance average
    double quadrature_tol = 1e-8;      // absolute, single-integral routes
};

/// Mean received power when harvesting from the np nearest sources:
/// P_C * E[sum_i min(1, x_i^-alpha_f)].  The bounded forward law is what
/// makes the value saturate at P_C as the source density grows.
MeanPowerEstimate mean_power_np_nearest(const NetworkConfig& cfg, long samples, Seed seed);

/// Mean received power when harvesting from every source in the network:
/// P_C * pi * lambda_p * alpha_f / (alpha_f - 2), the Campbell average of
/// the bounded law over the plane.  Exact, no sampling.
double mean_power_all_pbs(const NetworkConfig& cfg);

/// General np-nearest SINR coverage evaluator.
///
/// Coverage is the expectation, over the joint law of the np ascending
/// source distances, of  exp(-s*N0/(beta*P_C)) * L_I(s)  with
///   s      = theta * d00^alpha_b / sum_i min(1, x_i^-alpha_f),
///   L_I(s) = exp(-lap_coef * s^(2/alpha_b) * E_inner),
///   lap_coef = 2*pi^2*lambda_b / (alpha_b * sin(2*pi/alpha_b)),
/// and E_inner = E[(sum_k min(1, x_k^-alpha_f))^(2/alpha_b)] describing the
/// interferers' reflected powers.  E_inner does not depend on the outer
/// variables, so it is estimated once per configuration; the outer integral
/// is an importance-sampled average over the exact joint distance law.
/// The sampling error of both stages is propagated into abs_uncertainty.
class Theorem1Evaluator {
  public:
    Theorem1Evaluator(const NetworkConfig& cfg, const AnalysisBudget& budget, Seed seed);

    CoverageEstimate coverage(double theta) const;          // tagged theorem1
    CoverageEstimate coverage_zero_noise(double theta) const; // tagged corollary3

    const ExpectationEstimate& interference_expectation() const { return inner_; }

  private:
    CoverageEstimate evaluate(double theta, bool with_noise, Method tag) const;

    NetworkConfig cfg_;
    ExpectationEstimate inner_;
    std::vector<double> signal_sums_; // sum_i min(1, x_i^-alpha_f) draws
};

/// One-shot wrappers around Theorem1Evaluator.
CoverageEstimate coverage_theorem1(const NetworkConfig& cfg, double theta,
                                   const AnalysisBudget& budget, Seed seed);

/// Zero-noise variant of the general expression (any np).  Independent of
/// P_C and beta, which cancel once the noise term is dropped.
CoverageEstimate coverage_corollary3(const NetworkConfig& cfg, double theta,
                                     const AnalysisBudget& budget, Seed seed);

/// Single-source specialization (np = 1, alpha_f = alpha_b = alpha): one
/// adaptive integral over the nearest-source distance, with the
/// interference expectation in closed form through the bracket
///   1 - exp(-pi*lambda_p) - pi*lambda_p*Ei(-pi*lambda_p).
/// Deterministic to the requested tolerance.
CoverageEstimate coverage_corollary1(const NetworkConfig& cfg, double theta, double tol);

/// corollary1 with the noise factor removed; the result is independent of
/// P_C and beta.
CoverageEstimate coverage_corollary2(const NetworkConfig& cfg, double theta, double tol);

/// Closed form for nodes reflecting a fixed mean power instead of the
/// instantaneous one:  exp(-s*[N0/(beta*Pbar) + lap_coef*s^(2/alpha_b-1)])
/// with s = theta*d00^alpha_b.  Which mean to reflect (np-nearest or
/// network-wide) is the caller's choice, so Pbar is an explicit input.
CoverageEstimate coverage_corollary4(const NetworkConfig& cfg, double theta, double pbar_watts);

/// Zero-noise closed form
///   exp(-2*pi^2*lambda_b*theta^(2/alpha_b)*d00^2 / (alpha_b*sin(2*pi/alpha_b)))
/// depending only on lambda_b, alpha_b, theta and d00.
CoverageEstimate coverage_corollary5(const NetworkConfig& cfg, double theta);

/// Jensen approximation of the all-sources SIR coverage.  Same expression
/// as corollary5, reported under its own method tag.
CoverageEstimate coverage_theorem2(const NetworkConfig& cfg, double theta);

/// Transmission capacity: lambda_b * coverage * area, uncertainty scaled
/// identically.
CapacityEstimate capacity(const NetworkConfig& cfg, const CoverageEstimate& coverage, double area);

} // namespace wpbn
