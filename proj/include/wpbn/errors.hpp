// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wpbn {

/// Invalid scenario or sampler parameters (non-positive density, path loss
/// exponent <= 2, infeasible window margin, ...).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine missed its accuracy target.  Carries the best
/// estimate obtained so the caller can decide whether it is still usable.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate)
    {
    }

    double best_estimate() const { return best_estimate_; }

  private:
    double best_estimate_;
};

} // namespace wpbn
