// SPDX-License-Identifier: Apache-2.0
#include "wpbn/specfun.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include "wpbn/errors.hpp"

namespace wpbn {

namespace {

// GSL must not abort the process; every status code is handled here.
const bool g_gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

struct CountedFunction {
    const std::function<double(double)>* f;
    long evaluations;
};

double counted_call(double x, void* params)
{
    auto* cf = static_cast<CountedFunction*>(params);
    ++cf->evaluations;
    return (*cf->f)(x);
}

} // namespace

double expint_ei(double z)
{
    if (z == 0.0) {
        throw std::domain_error("Ei has a logarithmic singularity at 0");
    }
    gsl_sf_result result;
    const int status = gsl_sf_expint_Ei_e(z, &result);
    if (status == GSL_EUNDRFLW) {
        return 0.0;
    }
    if (status == GSL_EOVRFLW) {
        throw NumericalError("Ei overflow at z = " + std::to_string(z),
                             std::numeric_limits<double>::infinity());
    }
    if (status != GSL_SUCCESS) {
        throw NumericalError("Ei evaluation failed at z = " + std::to_string(z), result.val);
    }
    return result.val;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double lower,
                                         double tol)
{
    if (!(tol > 0.0)) {
        throw ConfigError("quadrature tolerance must be > 0");
    }

    constexpr std::size_t kMaxIntervals = 4096;
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> workspace(
        gsl_integration_workspace_alloc(kMaxIntervals));
    if (!workspace) {
        throw std::bad_alloc();
    }

    CountedFunction counted{&f, 0};
    gsl_function gf;
    gf.function = &counted_call;
    gf.params = &counted;

    double value = 0.0;
    double abserr = 0.0;
    // QAGIU: maps [lower, inf) onto (0, 1] and applies adaptive 15-point
    // Gauss-Kronrod subdivision with an absolute target.
    const int status = gsl_integration_qagiu(&gf, lower, tol, 0.0, kMaxIntervals,
                                             workspace.get(), &value, &abserr);

    QuadratureResult result{value, abserr, counted.evaluations};
    if (status != GSL_SUCCESS && !(abserr <= tol)) {
        throw NumericalError("semi-infinite quadrature did not reach tol=" + std::to_string(tol) +
                                 " (estimate " + std::to_string(value) + ", error " +
                                 std::to_string(abserr) + ")",
                             value);
    }
    return result;
}

ExpectationEstimate ordered_distance_expectation(double density, int np, double alpha_f,
                                                 double exponent_outer, long samples, Seed seed)
{
    if (!(density > 0.0)) {
        throw ConfigError("density must be > 0");
    }
    if (np < 1) {
        throw ConfigError("np must be >= 1");
    }
    if (!(alpha_f > 2.0)) {
        throw ConfigError("forward path loss exponent must be > 2");
    }
    if (samples < 1) {
        throw ConfigError("sample count must be >= 1");
    }

    Rng rng = make_rng(seed);
    std::exponential_distribution<double> exp1(1.0);
    const double pi_lambda = std::numbers::pi * density;
    const double half_alpha = 0.5 * alpha_f;

    double sum = 0.0;
    double sum_sq = 0.0;
    for (long n = 0; n < samples; ++n) {
        double arrival = 0.0;
        double gain_sum = 0.0;
        for (int i = 0; i < np; ++i) {
            arrival += exp1(rng);
            const double x_sq = arrival / pi_lambda; // squared distance of the i-th neighbor
            gain_sum += std::min(1.0, std::pow(x_sq, -half_alpha));
        }
        const double value = std::pow(gain_sum, exponent_outer);
        sum += value;
        sum_sq += value * value;
    }

    const double mean = sum / static_cast<double>(samples);
    double std_error = 0.0;
    if (samples > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(samples - 1));
        std_error = std::sqrt(var / static_cast<double>(samples));
    }
    return ExpectationEstimate{mean, std_error, samples};
}

} // namespace wpbn
