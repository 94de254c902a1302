#pragma once

// CHSH Bell test with polarization analyzers behind fluctuating channels.
//
// The source emits polarization-entangled light with multiphoton pairs
// controlled by the squeeze parameter xi. Coincidence probabilities for
// fixed channel transmittances are closed-form rational functions of the
// C-terms below; the turbulence enters through an average over the joint
// PDT. Double clicks are already resolved by random-bit assignment in the
// closed form.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "atmq/detector.hpp"
#include "atmq/errors.hpp"
#include "atmq/numerics.hpp"
#include "atmq/parallel.hpp"
#include "atmq/pdt.hpp"
#include "atmq/states.hpp"
#include "atmq/sweep.hpp"

namespace atmq {

struct CTerms {
    double c0 = 0.0;
    double c1a = 0.0;
    double c1b = 0.0;
    double c_same = 0.0;
    double c_different = 0.0;
};

struct ClickProbabilities {
    double same = 0.0;
    double different = 0.0;
};

/// Analyzer angles maximizing CHSH for a cos 2(theta_a - theta_b) structure.
inline constexpr std::array<double, 2> kDefaultAnglesA{0.0, std::numbers::pi / 4};
inline constexpr std::array<double, 2> kDefaultAnglesB{std::numbers::pi / 8, 3 * std::numbers::pi / 8};

/// Reciprocal averages need C0 bounded away from zero on the PDT support.
inline constexpr double kMinC0 = 1e-12;

struct BellSettings {
    SqueezeParameter xi;
    std::array<double, 2> theta_a = kDefaultAnglesA;
    std::array<double, 2> theta_b = kDefaultAnglesB;
    DetectorModel detector;
    JointTransmittanceDistribution joint =
        JointTransmittanceDistribution::perfectly_correlated(TransmittanceDistribution::dirac(1.0));
    QuadratureSpec quadrature{};
};

inline CTerms c_terms(double eta_a, double eta_b, double eta_c, SqueezeParameter xi, double theta_a,
                      double theta_b) {
    const double t = std::tanh(xi.value) * std::tanh(xi.value);
    const double xa = eta_c * eta_a;
    const double xb = eta_c * eta_b;
    const double brace = xa * xb * t - (1.0 + (xa - 1.0) * t) * (1.0 + (xb - 1.0) * t);
    const double one_minus_t = 1.0 - t;
    const double delta = theta_a - theta_b;
    const double sin2 = std::sin(delta) * std::sin(delta);
    const double cos2 = std::cos(delta) * std::cos(delta);
    const double pair = xa * xb * t * one_minus_t * one_minus_t;
    const double loss_both = (1.0 - xa) * (1.0 - xb) * t;

    CTerms c;
    c.c0 = brace * brace;
    c.c1a = xb * (1.0 - xa) * one_minus_t * t * brace;
    c.c1b = xa * (1.0 - xb) * one_minus_t * t * brace;
    c.c_same = pair * (loss_both - sin2);
    c.c_different = pair * (loss_both - cos2);
    return c;
}

/// Coincidence probabilities for fixed transmittances (no averaging).
inline ClickProbabilities click_probabilities_fixed(double eta_a, double eta_b, double eta_c, double nu,
                                                    SqueezeParameter xi, double theta_a, double theta_b) {
    const CTerms c = c_terms(eta_a, eta_b, eta_c, xi, theta_a, theta_b);
    const double t = std::tanh(xi.value) * std::tanh(xi.value);
    const double one_minus_t2 = (1.0 - t) * (1.0 - t);
    const double prefactor = 0.5 * std::exp(-4.0 * nu) * one_minus_t2 * one_minus_t2;
    const double boost = std::exp(2.0 * nu);
    const double singles = c.c0 / ((c.c0 + c.c1a) * (c.c0 + c.c1a)) + c.c0 / ((c.c0 + c.c1b) * (c.c0 + c.c1b));
    const double base = c.c0 + c.c1a + c.c1b;
    const double inv_same = 1.0 / (base + c.c_same);
    const double inv_different = 1.0 / (base + c.c_different);
    const double inv_c0 = 1.0 / c.c0;

    ClickProbabilities p;
    p.same = 0.5 + prefactor * (boost * (2.0 * inv_same - singles - 2.0 * inv_different) + inv_c0);
    p.different = 0.5 + prefactor * (boost * (2.0 * inv_different - singles - 2.0 * inv_same) + inv_c0);
    return p;
}

namespace detail {

inline void check_bell_settings(const BellSettings& s) {
    s.detector.validate();
    s.quadrature.validate();
    for (double a : s.theta_a) require(std::isfinite(a), "BellSettings: analyzer angles must be finite");
    for (double b : s.theta_b) require(std::isfinite(b), "BellSettings: analyzer angles must be finite");
    // |brace| grows with both transmittances, so C0 is smallest at the
    // lower corner of the support.
    const auto [lo_a, lo_b] = s.joint.support_lower();
    const CTerms c = c_terms(lo_a, lo_b, s.detector.efficiency, s.xi, 0.0, 0.0);
    if (!(c.c0 >= kMinC0)) {
        throw SingularityError("click probabilities: C0 = " + std::to_string(c.c0) +
                               " below 1e-12 near eta_a = " + std::to_string(lo_a) +
                               ", eta_b = " + std::to_string(lo_b) + " (xi = " +
                               std::to_string(s.xi.value) + ")");
    }
}

}  // namespace detail

/// PDT-averaged (P_same, P_different) at one pair of analyzer angles.
inline ClickProbabilities click_probabilities(const BellSettings& s, double theta_a, double theta_b) {
    detail::check_bell_settings(s);
    const double eta_c = s.detector.efficiency;
    const double nu = s.detector.noise;
    ClickProbabilities p;
    p.same = expect(
        s.joint,
        [&](double ea, double eb) {
            return click_probabilities_fixed(ea, eb, eta_c, nu, s.xi, theta_a, theta_b).same;
        },
        s.quadrature);
    p.different = expect(
        s.joint,
        [&](double ea, double eb) {
            return click_probabilities_fixed(ea, eb, eta_c, nu, s.xi, theta_a, theta_b).different;
        },
        s.quadrature);
    return p;
}

/// E = (P_same - P_different) / (P_same + P_different).
inline double correlation(const BellSettings& s, double theta_a, double theta_b) {
    const ClickProbabilities p = click_probabilities(s, theta_a, theta_b);
    const double total = p.same + p.different;
    if (!(total > 0.0)) {
        throw SingularityError("correlation: P_same + P_different = 0 (no coincidences)");
    }
    return (p.same - p.different) / total;
}

/// CHSH combination |E(a1,b1) - E(a1,b2)| + |E(a2,b2) + E(a2,b1)|.
inline double bell_parameter(const BellSettings& s) {
    const auto& a = s.theta_a;
    const auto& b = s.theta_b;
    return std::abs(correlation(s, a[0], b[0]) - correlation(s, a[0], b[1])) +
           std::abs(correlation(s, a[1], b[1]) + correlation(s, a[1], b[0]));
}

enum class BellSweepKind { squeeze, preselection };

/// Bell parameter over a grid of squeeze parameters or of preselection
/// thresholds (applied to each channel independently). Points whose
/// selection is empty are reported as invalid rows.
inline std::vector<SweepRow> bell_sweep(const BellSettings& settings, BellSweepKind kind,
                                        const std::vector<double>& grid, unsigned threads = 1) {
    detail::require(!grid.empty(), "bell_sweep: empty grid");
    std::vector<SweepRow> rows(grid.size());
    detail::parallel_for(
        grid.size(),
        [&](std::size_t i) {
            BellSettings s = settings;
            rows[i].param = grid[i];
            try {
                if (kind == BellSweepKind::squeeze) {
                    s.xi = SqueezeParameter(grid[i]);
                } else {
                    s.joint = truncate(settings.joint, {grid[i], SelectionKind::preselection});
                }
                rows[i].value = bell_parameter(s);
                rows[i].valid = true;
            } catch (const EmptySelectionError&) {
                rows[i].valid = false;
            }
        },
        threads);
    return rows;
}

}  // namespace atmq
