// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "wpbn/rng.hpp"

namespace wpbn {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

/// Monte Carlo estimate with its standard error.
struct ExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

/// Exponential integral Ei(z) (Cauchy principal value for z > 0).  For the
/// coverage expressions only negative arguments appear: Ei(-x) < 0 and
/// -pi*lambda*Ei(-pi*lambda) is the positive tail term of the single-source
/// interference bracket.  Throws std::domain_error at z = 0.
double expint_ei(double z);

/// Adaptive quadrature of f over [lower, inf), absolute tolerance `tol`.
/// Throws NumericalError (carrying the best estimate) if the target cannot
/// be met within the evaluation budget.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double lower,
                                         double tol);

/// E[(sum_{k=1..np} min(1, x_k^-alpha_f))^exponent_outer] where x_1 < ... <
/// x_np are the ordered nearest-neighbor distances of a PPP of the given
/// density.  Estimated by Monte Carlo over the exponential-spacing sampler;
/// nested quadrature over the joint density becomes impractical as np
/// grows, while the sampling error here is quantified by std_error.
ExpectationEstimate ordered_distance_expectation(double density, int np, double alpha_f,
                                                 double exponent_outer, long samples, Seed seed);

} // namespace wpbn
