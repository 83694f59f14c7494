// SPDX-License-Identifier: Apache-2.0
#include "wpbn/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "wpbn/errors.hpp"

namespace wpbn {

namespace {

PathLossLaw make_law(double exponent, bool bounded)
{
    if (!(exponent > 2.0)) {
        // At alpha <= 2 the interference Laplace transform loses its
        // sin(2*pi/alpha) factor and the Campbell mean power diverges.
        throw ConfigError("path loss exponent must be > 2");
    }
    return PathLossLaw{exponent, bounded};
}

} // namespace

PathLossLaw PathLossLaw::forward(double exponent)
{
    return make_law(exponent, true);
}

PathLossLaw PathLossLaw::backward(double exponent)
{
    return make_law(exponent, false);
}

FadingDraw draw_rayleigh(Rng& rng)
{
    // CN(0,1): independent real/imaginary parts, each N(0, 1/2).
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double re = gauss(rng);
    const double im = gauss(rng);
    FadingDraw draw;
    draw.complex_gain = {re, im};
    draw.power_gain = re * re + im * im;
    return draw;
}

double path_loss(double distance, const PathLossLaw& law)
{
    if (!(distance > 0.0)) {
        throw std::domain_error("path loss requires distance > 0");
    }
    const double gain = std::pow(distance, -law.exponent);
    return law.bounded ? std::min(1.0, gain) : gain;
}

double composite_received_power(std::span<const double> distances, double tx_power,
                                const PathLossLaw& forward_law, Rng& rng)
{
    if (!(tx_power > 0.0)) {
        throw std::domain_error("transmit power must be > 0");
    }
    if (distances.empty()) {
        throw std::domain_error("composite received power needs at least one source");
    }

    std::complex<double> amplitude{0.0, 0.0};
    for (double x : distances) {
        const double amp_gain = std::sqrt(tx_power * path_loss(x, forward_law));
        amplitude += amp_gain * draw_rayleigh(rng).complex_gain;
    }
    return std::norm(amplitude);
}

} // namespace wpbn
