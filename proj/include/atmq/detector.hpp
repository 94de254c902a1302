#pragma once

#include <cmath>

#include "atmq/errors.hpp"

namespace atmq {

/// Photodetector with efficiency eta_c and nu mean noise counts (dark
/// counts plus stray light) per detection window.
struct DetectorModel {
    double efficiency = 1.0;
    double noise = 0.0;

    void validate() const {
        detail::require(efficiency >= 0.0 && efficiency <= 1.0, "detector efficiency must lie in [0, 1]");
        detail::require(noise >= 0.0 && std::isfinite(noise), "detector noise must be finite and >= 0");
    }
};

}  // namespace atmq
