#pragma once

// Gaussian-state moment data: single-mode squeezed states and (displaced)
// two-mode squeezed vacuum.
//
// Quadrature convention: x(phi) = (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2),
// vacuum variance 1/2.

#include <cmath>
#include <complex>
#include <numbers>

#include "atmq/errors.hpp"

namespace atmq {

using Complex = std::complex<double>;

struct SqueezeParameter {
    double value = 0.0;

    constexpr SqueezeParameter() = default;
    explicit SqueezeParameter(double xi) : value(xi) {
        detail::require(xi >= 0.0 && std::isfinite(xi), "squeeze parameter must be finite and >= 0");
    }
};

struct SingleModeGaussian {
    Complex mean{};              // <a>
    double n_central = 0.0;      // <Da^dag Da>
    Complex a2_central{};        // <Da^2>
};

/// First moments and every central second moment of a two-mode state.
struct TwoModeMoments {
    Complex mean_a{};
    Complex mean_b{};
    double n_a = 0.0;            // <Da^dag Da>
    double n_b = 0.0;            // <Db^dag Db>
    Complex a2{};                // <Da^2>
    Complex b2{};                // <Db^2>
    Complex ab{};                // <Da Db>
    Complex adag_b{};            // <Da^dag Db>
};

/// Normally ordered quadrature variance <:Dx(phi)^2:>.
inline double quad_variance_normal(const SingleModeGaussian& state, double phi) {
    return state.n_central + (state.a2_central * std::polar(1.0, -2.0 * phi)).real();
}

/// min over phi of <:Dx(phi)^2:>; physical states stay >= -1/2.
inline double min_quad_variance_normal(const SingleModeGaussian& state) {
    return state.n_central - std::abs(state.a2_central);
}

/// <x(phi)>.
inline double quad_mean(Complex mean, double phi) {
    return std::numbers::sqrt2 * (mean * std::polar(1.0, -phi)).real();
}

/// Squeezed (displaced) vacuum whose quadrature at `phase` has the reduced
/// normally ordered variance (e^{-2 xi} - 1) / 2.
inline SingleModeGaussian squeezed_vacuum(SqueezeParameter xi, double phase, Complex displacement = {}) {
    const double r = xi.value;
    SingleModeGaussian s;
    s.mean = displacement;
    s.n_central = std::sinh(r) * std::sinh(r);
    s.a2_central = -std::polar(std::sinh(r) * std::cosh(r), 2.0 * phase);
    return s;
}

/// Squeeze parameter giving `db` decibels relative to vacuum noise
/// (negative for squeezing).
inline SqueezeParameter squeeze_from_db(double db) {
    detail::require(db <= 0.0, "squeeze_from_db: expects a non-positive dB value");
    return SqueezeParameter(-db * std::numbers::ln10 / 20.0);
}

inline TwoModeMoments tmsv(SqueezeParameter xi, Complex d_a = {}, Complex d_b = {}) {
    const double r = xi.value;
    TwoModeMoments m;
    m.mean_a = d_a;
    m.mean_b = d_b;
    m.n_a = m.n_b = std::sinh(r) * std::sinh(r);
    m.ab = std::sinh(r) * std::cosh(r);
    return m;
}

}  // namespace atmq
