// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>

#include "wpbn/rng.hpp"

namespace wpbn {

/// One Rayleigh fading draw: circularly symmetric complex gain of unit
/// variance and its squared magnitude (unit-mean exponential).
struct FadingDraw {
    std::complex<double> complex_gain;
    double power_gain = 0.0;
};

/// Distance-power law g(d) = d^-alpha, optionally clamped at 1 near the
/// transmitter (min{1, d^-alpha}).  Exponents <= 2 are rejected: the
/// interference integrals and the network-wide mean power both diverge.
struct PathLossLaw {
    double exponent = 4.0;
    bool bounded = false;

    /// Forward (power source -> node) law: bounded, so the received power
    /// stays finite at vanishing distance.
    static PathLossLaw forward(double exponent);
    /// Backward (node -> receiver) law: plain d^-alpha, gains above 1 are
    /// allowed below 1 m.
    static PathLossLaw backward(double exponent);
};

FadingDraw draw_rayleigh(Rng& rng);

/// Path gain at the given distance; throws std::domain_error for d <= 0.
double path_loss(double distance, const PathLossLaw& law);

/// Received power from several coherent transmitters at the given
/// distances: |sum_i sqrt(tx_power) h_i g(x_i)^(1/2)|^2 with fresh
/// independent Rayleigh draws h_i.  Conditioned on the distances the result
/// is exponentially distributed with mean tx_power * sum_i g(x_i).
double composite_received_power(std::span<const double> distances, double tx_power,
                                const PathLossLaw& forward_law, Rng& rng);

} // namespace wpbn
