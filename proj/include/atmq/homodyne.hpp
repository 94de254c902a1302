#pragma once

// Quadrature squeezing behind fluctuating channels, including the
// postprocessing noise of homodyne detection with a co-propagating local
// oscillator.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "atmq/errors.hpp"
#include "atmq/numerics.hpp"
#include "atmq/parallel.hpp"
#include "atmq/pdt.hpp"
#include "atmq/states.hpp"
#include "atmq/sweep.hpp"

namespace atmq {

struct HomodyneModel {
    double lo_amplitude = 1.0;  // r
    double noise = 0.0;         // nu
    double eta_min = 1.0;       // lower bound on the channel transmittance

    void validate() const {
        detail::require(lo_amplitude > 0.0, "HomodyneModel: local-oscillator amplitude must be > 0");
        detail::require(noise >= 0.0, "HomodyneModel: noise must be >= 0");
        detail::require(eta_min > 0.0 && eta_min <= 1.0, "HomodyneModel: eta_min must lie in (0, 1]");
    }
};

/// <T^2> and <DT^2> with T = sqrt(eta).
struct AmplitudeStats {
    double t2 = 1.0;
    double fluctuation = 0.0;
};

inline AmplitudeStats amplitude_stats(const TransmittanceDistribution& dist) {
    const double t = moment(dist, 0.5);
    const double t2 = moment(dist, 1.0);
    return {t2, dist.is_degenerate() ? 0.0 : t2 - t * t};
}

/// <:Dx(phi)^2:>_out = <T^2> <:Dx(phi)^2:>_in + <DT^2> <x(phi)>_in^2.
inline double squeeze_out(const SingleModeGaussian& state, const TransmittanceDistribution& dist, double phi) {
    const AmplitudeStats a = amplitude_stats(dist);
    const double x = quad_mean(state.mean, phi);
    return a.t2 * quad_variance_normal(state, phi) + a.fluctuation * x * x;
}

/// Squeezing in dB relative to the vacuum level 1/2.
inline double squeezing_db(double normally_ordered_variance) {
    if (normally_ordered_variance < -0.5) {
        throw InvalidArgument("squeezing_db: normally ordered variance below -1/2 is unphysical");
    }
    return 10.0 * std::log1p(2.0 * normally_ordered_variance) / std::numbers::ln10;
}

/// Normally ordered variance for a given squeezing level in dB.
inline double variance_from_db(double db) { return 0.5 * std::expm1(db * std::numbers::ln10 / 10.0); }

/// Squeezing (dB) after postselecting eta >= threshold, one row per threshold.
inline std::vector<SweepRow> postselect_sweep(const SingleModeGaussian& state,
                                              const TransmittanceDistribution& dist,
                                              const std::vector<double>& thresholds, double phi,
                                              unsigned threads = 1) {
    detail::require(!thresholds.empty(), "postselect_sweep: empty threshold list");
    std::vector<SweepRow> rows(thresholds.size());
    detail::parallel_for(
        thresholds.size(),
        [&](std::size_t i) {
            rows[i].param = thresholds[i];
            try {
                const auto selected = truncate(dist, {thresholds[i], SelectionKind::postselection});
                rows[i].value = squeezing_db(squeeze_out(state, selected, phi));
                rows[i].valid = true;
            } catch (const EmptySelectionError&) {
                rows[i].valid = false;
            }
        },
        threads);
    return rows;
}

/// Quadrature variance (normally ordered) from the effective P function of
/// noisy homodyne data processing. For each eta the attenuated P function is
/// smoothed by exp[s Laplacian] with s = nu / (4 r^2 eta^2); a Gaussian
/// smoothing of strength s adds 4 s to <:Dx(phi)^2:> for every phi. The
/// transmittance entering s is clamped below at eta_min.
inline double noisy_variance(const SingleModeGaussian& state, const TransmittanceDistribution& dist,
                             const HomodyneModel& model, double phi, const QuadratureSpec& spec = {}) {
    model.validate();
    const double base = squeeze_out(state, dist, phi);
    if (model.noise == 0.0) return base;
    const double floor = model.eta_min;
    const double inv_sq = expect_window(
                              dist, [](double eta) { return 1.0 / (eta * eta); }, floor,
                              std::numeric_limits<double>::infinity(), spec) +
                          (1.0 - survival(dist, floor)) / (floor * floor);
    const double r2 = model.lo_amplitude * model.lo_amplitude;
    return base + model.noise / r2 * inv_sq;
}

}  // namespace atmq
