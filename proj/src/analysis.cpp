// SPDX-License-Identifier: Apache-2.0
#include "wpbn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wpbn/errors.hpp"

namespace wpbn {

namespace {

double clamp_probability(double p)
{
    return std::clamp(p, 0.0, 1.0);
}

/// 2*pi^2*lambda_b / (alpha_b * sin(2*pi/alpha_b)); positive for alpha_b > 2.
double laplace_coefficient(double lambda_b, double alpha_b)
{
    return 2.0 * std::numbers::pi * std::numbers::pi * lambda_b /
           (alpha_b * std::sin(2.0 * std::numbers::pi / alpha_b));
}

/// SIR exponent shared by the fixed-power closed forms:
/// 2*pi^2*lambda_b*theta^(2/alpha_b)*d00^2 / (alpha_b*sin(2*pi/alpha_b)).
/// corollary4, corollary5 and theorem2 all evaluate this expression through
/// this one routine so the zero-noise specializations agree bit for bit.
double sir_exponent(double lambda_b, double alpha_b, double theta, double d00)
{
    return laplace_coefficient(lambda_b, alpha_b) * std::pow(theta, 2.0 / alpha_b) * d00 * d00;
}

void check_theta(double theta)
{
    if (!(theta > 0.0)) {
        throw ConfigError("SINR threshold must be > 0 (linear scale)");
    }
}

/// Draws of sum_i min(1, x_i^-alpha_f) over the ordered nearest-source
/// distances (the reflected-power footprint of one node).
std::vector<double> draw_signal_sums(const NetworkConfig& cfg, long samples, Seed seed)
{
    Rng rng = make_rng(seed);
    std::exponential_distribution<double> exp1(1.0);
    const double pi_lambda = std::numbers::pi * cfg.lambda_p;
    const double half_alpha = 0.5 * cfg.alpha_f;

    std::vector<double> sums(static_cast<std::size_t>(samples));
    for (auto& out : sums) {
        double arrival = 0.0;
        double gain_sum = 0.0;
        for (int i = 0; i < cfg.np; ++i) {
            arrival += exp1(rng);
            gain_sum += std::min(1.0, std::pow(arrival / pi_lambda, -half_alpha));
        }
        out = gain_sum;
    }
    return sums;
}

} // namespace

void NetworkConfig::validate() const
{
    if (!(lambda_p > 0.0)) throw ConfigError("lambda_p must be > 0");
    if (!(lambda_b > 0.0)) throw ConfigError("lambda_b must be > 0");
    if (!(pc_watts > 0.0)) throw ConfigError("pc_watts must be > 0");
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must be in (0, 1]");
    if (!(d00 > 0.0)) throw ConfigError("d00 must be > 0");
    if (!(n0_watts >= 0.0)) throw ConfigError("n0_watts must be >= 0");
    if (!(alpha_f > 2.0)) throw ConfigError("alpha_f must be > 2");
    if (!(alpha_b > 2.0)) throw ConfigError("alpha_b must be > 2");
    if (np < 1) throw ConfigError("np must be >= 1");
}

const char* to_string(Method method)
{
    switch (method) {
    case Method::theorem1: return "theorem1";
    case Method::corollary1: return "corollary1";
    case Method::corollary2: return "corollary2";
    case Method::corollary3: return "corollary3";
    case Method::corollary4: return "corollary4";
    case Method::corollary5: return "corollary5";
    case Method::theorem2: return "theorem2";
    case Method::simulation: return "simulation";
    }
    return "unknown";
}

MeanPowerEstimate mean_power_np_nearest(const NetworkConfig& cfg, long samples, Seed seed)
{
    cfg.validate();
    const ExpectationEstimate e =
        ordered_distance_expectation(cfg.lambda_p, cfg.np, cfg.alpha_f, 1.0, samples, seed);
    return MeanPowerEstimate{cfg.pc_watts * e.value, cfg.pc_watts * e.std_error};
}

double mean_power_all_pbs(const NetworkConfig& cfg)
{
    if (!(cfg.alpha_f > 2.0)) {
        throw ConfigError("network-wide mean power diverges for alpha_f <= 2");
    }
    if (!(cfg.lambda_p > 0.0) || !(cfg.pc_watts > 0.0)) {
        throw ConfigError("lambda_p and pc_watts must be > 0");
    }
    return cfg.pc_watts * std::numbers::pi * cfg.lambda_p * cfg.alpha_f / (cfg.alpha_f - 2.0);
}

Theorem1Evaluator::Theorem1Evaluator(const NetworkConfig& cfg, const AnalysisBudget& budget,
                                     Seed seed)
    : cfg_(cfg)
{
    cfg.validate();
    inner_ = ordered_distance_expectation(cfg.lambda_p, cfg.np, cfg.alpha_f, 2.0 / cfg.alpha_b,
                                          budget.expectation_samples, derive_seed(seed, 0));
    signal_sums_ = draw_signal_sums(cfg, budget.outer_samples, derive_seed(seed, 1));
}

CoverageEstimate Theorem1Evaluator::coverage(double theta) const
{
    return evaluate(theta, true, Method::theorem1);
}

CoverageEstimate Theorem1Evaluator::coverage_zero_noise(double theta) const
{
    return evaluate(theta, false, Method::corollary3);
}

CoverageEstimate Theorem1Evaluator::evaluate(double theta, bool with_noise, Method tag) const
{
    check_theta(theta);
    const double lap_coef = laplace_coefficient(cfg_.lambda_b, cfg_.alpha_b);
    const double noise_coef =
        with_noise ? cfg_.n0_watts / (cfg_.beta * cfg_.pc_watts) : 0.0;
    const double s_num = theta * std::pow(cfg_.d00, cfg_.alpha_b);
    const double two_over_ab = 2.0 / cfg_.alpha_b;

    double sum = 0.0;
    double sum_sq = 0.0;
    double sensitivity = 0.0; // d(mean)/d(E_inner), for error propagation
    for (double signal : signal_sums_) {
        const double s = s_num / signal;
        const double lap_term = lap_coef * std::pow(s, two_over_ab);
        const double w = std::exp(-s * noise_coef - lap_term * inner_.value);
        sum += w;
        sum_sq += w * w;
        sensitivity += w * lap_term;
    }

    const auto n = static_cast<double>(signal_sums_.size());
    const double mean = sum / n;
    double se_outer = 0.0;
    if (signal_sums_.size() > 1) {
        const double var = std::max(0.0, (sum_sq - sum * mean) / (n - 1.0));
        se_outer = std::sqrt(var / n);
    }
    const double se_inner = (sensitivity / n) * inner_.std_error;
    const double uncertainty = std::hypot(se_outer, se_inner);
    return CoverageEstimate{clamp_probability(mean), uncertainty, tag, theta};
}

CoverageEstimate coverage_theorem1(const NetworkConfig& cfg, double theta,
                                   const AnalysisBudget& budget, Seed seed)
{
    return Theorem1Evaluator(cfg, budget, seed).coverage(theta);
}

CoverageEstimate coverage_corollary3(const NetworkConfig& cfg, double theta,
                                     const AnalysisBudget& budget, Seed seed)
{
    return Theorem1Evaluator(cfg, budget, seed).coverage_zero_noise(theta);
}

namespace {

CoverageEstimate single_pb_coverage(const NetworkConfig& cfg, double theta, double tol,
                                    bool with_noise, Method tag)
{
    cfg.validate();
    check_theta(theta);
    if (cfg.np != 1) {
        throw ConfigError("single-source coverage route requires np = 1");
    }
    if (cfg.alpha_f != cfg.alpha_b) {
        throw ConfigError("single-source coverage route requires alpha_f = alpha_b");
    }

    const double alpha = cfg.alpha_f;
    const double u = std::numbers::pi * cfg.lambda_p;
    // Interference-side mean of min(1, x^-2): the clamp part integrates to
    // 1 - e^-u, the tail is the exponential-integral term.
    const double bracket = 1.0 - std::exp(-u) - u * expint_ei(-u);
    const double lap_coef = laplace_coefficient(cfg.lambda_b, cfg.alpha_b) * bracket;
    const double noise_coef = with_noise ? cfg.n0_watts / (cfg.beta * cfg.pc_watts) : 0.0;

    const double s_clamp = theta * std::pow(cfg.d00, alpha); // x <= 1: unit signal gain
    const double s_clamp_pow = std::pow(s_clamp, 2.0 / alpha);

    // Clamp region in closed form, tail by adaptive quadrature; the signal
    // gain min(1, x^-alpha) matches the received-power model everywhere.
    const double head =
        (1.0 - std::exp(-u)) * std::exp(-s_clamp * noise_coef - lap_coef * s_clamp_pow);
    const auto tail_integrand = [&](double x) {
        const double s = s_clamp * std::pow(x, alpha);
        return 2.0 * u * x *
               std::exp(-u * x * x - s * noise_coef - lap_coef * s_clamp_pow * x * x);
    };
    const QuadratureResult tail = integrate_semi_infinite(tail_integrand, 1.0, tol);

    return CoverageEstimate{clamp_probability(head + tail.value), tail.abs_error_estimate, tag,
                            theta};
}

} // namespace

CoverageEstimate coverage_corollary1(const NetworkConfig& cfg, double theta, double tol)
{
    return single_pb_coverage(cfg, theta, tol, true, Method::corollary1);
}

CoverageEstimate coverage_corollary2(const NetworkConfig& cfg, double theta, double tol)
{
    return single_pb_coverage(cfg, theta, tol, false, Method::corollary2);
}

CoverageEstimate coverage_corollary4(const NetworkConfig& cfg, double theta, double pbar_watts)
{
    cfg.validate();
    check_theta(theta);
    if (!(pbar_watts > 0.0)) {
        throw ConfigError("mean reflected power must be > 0");
    }
    const double s = theta * std::pow(cfg.d00, cfg.alpha_b);
    const double noise_term = s * cfg.n0_watts / (cfg.beta * pbar_watts);
    const double sir_term = sir_exponent(cfg.lambda_b, cfg.alpha_b, theta, cfg.d00);
    return CoverageEstimate{clamp_probability(std::exp(-(noise_term + sir_term))), 0.0,
                            Method::corollary4, theta};
}

CoverageEstimate coverage_corollary5(const NetworkConfig& cfg, double theta)
{
    cfg.validate();
    check_theta(theta);
    const double sir_term = sir_exponent(cfg.lambda_b, cfg.alpha_b, theta, cfg.d00);
    return CoverageEstimate{clamp_probability(std::exp(-sir_term)), 0.0, Method::corollary5,
                            theta};
}

CoverageEstimate coverage_theorem2(const NetworkConfig& cfg, double theta)
{
    CoverageEstimate est = coverage_corollary5(cfg, theta);
    est.method = Method::theorem2;
    return est;
}

CapacityEstimate capacity(const NetworkConfig& cfg, const CoverageEstimate& coverage, double area)
{
    if (!(area > 0.0)) {
        throw ConfigError("capacity area must be > 0");
    }
    return CapacityEstimate{cfg.lambda_b * coverage.value * area,
                            cfg.lambda_b * coverage.abs_uncertainty * area};
}

} // namespace wpbn
