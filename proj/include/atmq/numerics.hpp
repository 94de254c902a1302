#pragma once

// Deterministic adaptive quadrature on finite intervals and small
// Monte Carlo statistics helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "atmq/errors.hpp"

namespace atmq {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 40;

    void validate() const {
        detail::require(rel_tol > 0 && abs_tol > 0, "QuadratureSpec: tolerances must be > 0");
        detail::require(max_depth >= 1, "QuadratureSpec: max_depth must be >= 1");
    }
};

struct Rectangle {
    double x_lo, x_hi, y_lo, y_hi;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15). All nodes are
// interior, so integrable endpoint singularities are never evaluated.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;
};

template <class F>
Panel kronrod15(F& f, double a, double b, int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        throw AccuracyError("integrate: non-finite integrand on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            kronrod, std::numeric_limits<double>::infinity());
    }
    return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace detail

/// Integrates `f` over the partition given by `breakpoints` (sorted,
/// at least two entries) with globally adaptive Gauss-Kronrod bisection.
/// The panel with the largest error estimate is split until the summed
/// estimate is within max(abs_tol, rel_tol * |result|). Throws
/// AccuracyError carrying the best estimate when a panel would exceed
/// `max_depth`.
template <class F>
double integrate(F&& f, std::span<const double> breakpoints, const QuadratureSpec& spec = {}) {
    spec.validate();
    detail::require(breakpoints.size() >= 2, "integrate: need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        detail::require(breakpoints[i - 1] <= breakpoints[i], "integrate: breakpoints must be sorted");
    }

    std::vector<detail::Panel> panels;
    panels.reserve(64);
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (breakpoints[i] > breakpoints[i - 1]) {
            panels.push_back(detail::kronrod15(f, breakpoints[i - 1], breakpoints[i], 0));
        }
    }
    if (panels.empty()) return 0.0;

    constexpr std::size_t kMaxPanels = 1u << 16;
    while (true) {
        double total = 0.0;
        double total_error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            total_error += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const double tolerance = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_error <= tolerance) return total;

        const detail::Panel p = panels[worst];
        // Estimates at round-off level cannot be improved by splitting.
        const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() *
                                std::max(std::abs(p.value), std::abs(total));
        if (p.error <= roundoff) return total;
        if (p.depth >= spec.max_depth || panels.size() >= kMaxPanels) {
            throw AccuracyError("integrate: no convergence on [" + std::to_string(breakpoints.front()) +
                                    ", " + std::to_string(breakpoints.back()) + "] (estimate " +
                                    std::to_string(total) + ", error bound " +
                                    std::to_string(total_error) + ")",
                                total, total_error);
        }
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = detail::kronrod15(f, p.a, mid, p.depth + 1);
        panels.push_back(detail::kronrod15(f, mid, p.b, p.depth + 1));
    }
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    detail::require(a <= b, "integrate: require a <= b");
    const std::array<double, 2> bounds{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bounds), spec);
}

/// Iterated (tensor-product) quadrature over a rectangle: the 1D rule in
/// y nested inside the 1D rule in x.
template <class F>
double integrate2(F&& f, const Rectangle& rect, const QuadratureSpec& spec = {}) {
    detail::require(rect.x_lo <= rect.x_hi && rect.y_lo <= rect.y_hi, "integrate2: empty rectangle");
    auto inner = [&](double x) {
        return integrate([&](double y) { return f(x, y); }, rect.y_lo, rect.y_hi, spec);
    };
    return integrate(inner, rect.x_lo, rect.x_hi, spec);
}

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Mean and standard error of the mean (Welford accumulation).
inline SampleStats sample_stats(std::span<const double> values) {
    SampleStats s;
    double m2 = 0.0;
    for (double v : values) {
        ++s.count;
        const double delta = v - s.mean;
        s.mean += delta / static_cast<double>(s.count);
        m2 += delta * (v - s.mean);
    }
    if (s.count > 1) {
        const double var = m2 / static_cast<double>(s.count - 1);
        s.std_error = std::sqrt(var / static_cast<double>(s.count));
    }
    return s;
}

}  // namespace atmq
