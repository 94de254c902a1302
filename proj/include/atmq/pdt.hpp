#pragma once

// Probability distributions of transmittance (PDTs) for one and two
// fluctuating-loss channels.
//
// A one-mode PDT is a law for the intensity transmittance eta in [0, 1].
// Continuous laws (truncated log-normal, Beta) are stored as a law for a
// raw variable X in [0, 1] together with a lower selection cutoff on X and
// a deterministic pre-factor, eta = eta_det * X. Atomic laws (Dirac,
// empirical histogram) fold both directly into their atoms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "atmq/errors.hpp"
#include "atmq/numerics.hpp"
#include "atmq/random.hpp"

namespace atmq {

struct DiracLaw {
    double eta;
};

/// ln X ~ Normal(mu, sigma^2) conditioned on X <= 1.
struct LogNormalLaw {
    double mu;
    double sigma;
};

struct BetaLaw {
    double p;
    double q;
};

struct EmpiricalBin {
    double eta;
    double weight;
};

/// Piecewise-atomic histogram; bins sorted by eta, weights sum to one.
struct EmpiricalLaw {
    std::vector<EmpiricalBin> bins;
};

enum class SelectionKind { preselection, postselection };

/// Keep only events with transmittance >= threshold.
struct SelectionPolicy {
    double threshold = 0.0;
    SelectionKind kind = SelectionKind::preselection;
};

class TransmittanceDistribution {
  public:
    using Law = std::variant<DiracLaw, LogNormalLaw, BetaLaw, EmpiricalLaw>;

    static TransmittanceDistribution dirac(double eta) {
        detail::require(eta >= 0.0 && eta <= 1.0, "Dirac PDT requires eta in [0, 1]");
        return TransmittanceDistribution(DiracLaw{eta});
    }

    static TransmittanceDistribution lognormal(double mu, double sigma) {
        detail::require(std::isfinite(mu), "log-normal PDT requires finite mu");
        detail::require(sigma > 0.0 && std::isfinite(sigma), "log-normal PDT requires sigma > 0");
        return TransmittanceDistribution(LogNormalLaw{mu, sigma});
    }

    static TransmittanceDistribution beta(double p, double q) {
        detail::require(p > 0.0 && q > 0.0 && std::isfinite(p) && std::isfinite(q),
                        "Beta PDT requires p > 0 and q > 0");
        return TransmittanceDistribution(BetaLaw{p, q});
    }

    /// Weights are renormalized; zero-weight bins are dropped.
    static TransmittanceDistribution empirical(std::vector<EmpiricalBin> bins) {
        double total = 0.0;
        for (const auto& bin : bins) {
            detail::require(bin.eta >= 0.0 && bin.eta <= 1.0, "empirical PDT bin outside [0, 1]");
            detail::require(bin.weight >= 0.0 && std::isfinite(bin.weight),
                            "empirical PDT weights must be finite and >= 0");
            total += bin.weight;
        }
        detail::require(total > 0.0, "empirical PDT needs positive total weight");
        std::erase_if(bins, [](const EmpiricalBin& b) { return b.weight == 0.0; });
        for (auto& bin : bins) bin.weight /= total;
        std::stable_sort(bins.begin(), bins.end(),
                         [](const EmpiricalBin& l, const EmpiricalBin& r) { return l.eta < r.eta; });
        return TransmittanceDistribution(EmpiricalLaw{std::move(bins)});
    }

    [[nodiscard]] const Law& law() const noexcept { return law_; }
    [[nodiscard]] double eta_det() const noexcept { return eta_det_; }
    /// Lower bound on the raw variable X (continuous laws only).
    [[nodiscard]] double cutoff() const noexcept { return cutoff_; }

    [[nodiscard]] bool is_atomic() const noexcept {
        return std::holds_alternative<DiracLaw>(law_) || std::holds_alternative<EmpiricalLaw>(law_);
    }

    /// True when the law is a single point mass.
    [[nodiscard]] bool is_degenerate() const noexcept {
        if (std::holds_alternative<DiracLaw>(law_)) return true;
        if (const auto* e = std::get_if<EmpiricalLaw>(&law_)) return e->bins.size() == 1;
        return false;
    }

    [[nodiscard]] double support_lower() const {
        if (const auto* d = std::get_if<DiracLaw>(&law_)) return d->eta;
        if (const auto* e = std::get_if<EmpiricalLaw>(&law_)) return e->bins.front().eta;
        return eta_det_ * cutoff_;
    }

    [[nodiscard]] double support_upper() const {
        if (const auto* d = std::get_if<DiracLaw>(&law_)) return d->eta;
        if (const auto* e = std::get_if<EmpiricalLaw>(&law_)) return e->bins.back().eta;
        return eta_det_;
    }

    friend TransmittanceDistribution scale(const TransmittanceDistribution& dist, double eta_det);
    friend TransmittanceDistribution truncate(const TransmittanceDistribution& dist,
                                              const SelectionPolicy& policy);

  private:
    explicit TransmittanceDistribution(Law law) : law_(std::move(law)) {}

    Law law_;
    double eta_det_ = 1.0;
    double cutoff_ = 0.0;
};

namespace detail {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_cdf_inv(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }
inline double normal_sf_inv(double p) { return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

/// P(a <= Z <= b) for a standard normal Z, evaluated in whichever tail
/// keeps the difference accurate.
inline double normal_mass(double a, double b) {
    if (b <= a) return 0.0;
    if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
    if (a >= 0.0) return normal_sf(a) - normal_sf(b);
    return 1.0 - normal_cdf(a) - normal_sf(b);
}

/// Standardized bounds of the log-normal window ln X in [ln cutoff, 0].
inline std::pair<double, double> lognormal_bounds(const LogNormalLaw& law, double cutoff) {
    const double lo = cutoff > 0.0 ? (std::log(cutoff) - law.mu) / law.sigma
                                   : -std::numeric_limits<double>::infinity();
    return {lo, -law.mu / law.sigma};
}

inline double lognormal_mass(const LogNormalLaw& law, double cutoff) {
    const auto [lo, hi] = lognormal_bounds(law, cutoff);
    return normal_mass(lo, hi);
}

inline double beta_mass(const BetaLaw& law, double cutoff) {
    return cutoff > 0.0 ? boost::math::ibetac(law.p, law.q, cutoff) : 1.0;
}

// Mass of the raw law on [cutoff, 1] relative to the untruncated law.
inline double raw_mass(const TransmittanceDistribution::Law& law, double cutoff) {
    if (const auto* l = std::get_if<LogNormalLaw>(&law)) return lognormal_mass(*l, cutoff);
    if (const auto* b = std::get_if<BetaLaw>(&law)) return beta_mass(*b, cutoff);
    return 1.0;
}

inline void add_breakpoint(std::vector<double>& points, double x) {
    if (x > points.front() && x < points.back()) points.push_back(x);
}

inline std::vector<double> finalize_breakpoints(std::vector<double> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

// E[f(eta) 1{x_lo <= X <= x_hi}] for a continuous law, with x the raw variable.
template <class F>
double continuous_window(const TransmittanceDistribution& dist, F& f, double x_lo, double x_hi,
                         const QuadratureSpec& spec) {
    x_lo = std::max(x_lo, dist.cutoff());
    x_hi = std::min(x_hi, 1.0);
    if (!(x_lo < x_hi)) return 0.0;
    const double s = dist.eta_det();

    if (const auto* l = std::get_if<LogNormalLaw>(&dist.law())) {
        const double norm = lognormal_mass(*l, dist.cutoff());
        // Integrate in y = ln X, where the law is a Gaussian bump of width sigma.
        const double y_hi = std::log(x_hi);
        const double far = std::min(l->mu, 0.0) - 14.0 * l->sigma;
        const double y_lo = x_lo > 0.0 ? std::max(std::log(x_lo), far) : far;
        if (!(y_lo < y_hi)) return 0.0;
        std::vector<double> points{y_lo, y_hi};
        for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
            add_breakpoint(points, l->mu + k * l->sigma);
        }
        points = finalize_breakpoints(std::move(points));
        const double prefactor = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * l->sigma * norm);
        auto integrand = [&](double y) {
            const double z = (y - l->mu) / l->sigma;
            return prefactor * std::exp(-0.5 * z * z) * f(s * std::exp(y));
        };
        return integrate(integrand, std::span<const double>(points), spec);
    }

    const auto& b = std::get<BetaLaw>(dist.law());
    const double norm = beta_mass(b, dist.cutoff());
    const double mean = b.p / (b.p + b.q);
    const double sd = std::sqrt(b.p * b.q / ((b.p + b.q) * (b.p + b.q) * (b.p + b.q + 1.0)));
    auto breakpoints = [&](double lo, double hi, auto&& map) {
        std::vector<double> points{map(lo), map(hi)};
        for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
            const double x = mean + k * sd;
            if (x > lo && x < hi) add_breakpoint(points, map(x));
        }
        return finalize_breakpoints(std::move(points));
    };

    // Density singularities x^(p-1) at 0 (p < 1) and (1-x)^(q-1) at 1
    // (q < 1) are removed by u = x^p and v = (1-x)^q on the touching end.
    const bool singular_lo = b.p < 1.0 && x_lo == 0.0;
    const bool singular_hi = b.q < 1.0 && x_hi == 1.0;
    double mid_lo = x_lo;
    double mid_hi = x_hi;
    if (singular_lo && singular_hi) {
        mid_lo = mid_hi = 0.5;
    } else if (singular_lo) {
        mid_lo = x_hi;
    } else if (singular_hi) {
        mid_hi = x_lo;
    }
    const double scale_norm = boost::math::beta(b.p, b.q) * norm;

    double total = 0.0;
    if (singular_lo) {
        auto integrand = [&](double u) {
            const double x = std::pow(u, 1.0 / b.p);
            return std::pow(1.0 - x, b.q - 1.0) / (b.p * scale_norm) * f(s * x);
        };
        const auto points = breakpoints(0.0, mid_lo, [&](double x) { return std::pow(x, b.p); });
        total += integrate(integrand, std::span<const double>(points), spec);
    }
    if (mid_lo < mid_hi) {
        auto integrand = [&](double x) {
            return boost::math::ibeta_derivative(b.p, b.q, x) / norm * f(s * x);
        };
        const auto points = breakpoints(mid_lo, mid_hi, [](double x) { return x; });
        total += integrate(integrand, std::span<const double>(points), spec);
    }
    if (singular_hi) {
        auto integrand = [&](double v) {
            const double x = 1.0 - std::pow(v, 1.0 / b.q);
            return std::pow(x, b.p - 1.0) / (b.q * scale_norm) * f(s * x);
        };
        const auto points = breakpoints(mid_hi, 1.0, [&](double x) { return std::pow(1.0 - x, b.q); });
        total += integrate(integrand, std::span<const double>(points), spec);
    }
    return total;
}

}  // namespace detail

/// Pointwise density of eta. Atomic laws have no pointwise density.
inline double density(const TransmittanceDistribution& dist, double eta) {
    detail::require(eta >= 0.0 && eta <= 1.0, "density: eta must lie in [0, 1]");
    if (dist.is_atomic()) {
        throw InvalidArgument("density: pointwise density is undefined for atomic PDTs");
    }
    const double s = dist.eta_det();
    const double x = eta / s;
    if (x < dist.cutoff() || x > 1.0) return 0.0;
    if (const auto* l = std::get_if<LogNormalLaw>(&dist.law())) {
        if (x <= 0.0) return 0.0;
        const double z = (std::log(x) - l->mu) / l->sigma;
        const double raw = std::exp(-0.5 * z * z) /
                           (std::sqrt(2.0 * std::numbers::pi) * l->sigma * x *
                            detail::lognormal_mass(*l, dist.cutoff()));
        return raw / s;
    }
    const auto& b = std::get<BetaLaw>(dist.law());
    return boost::math::ibeta_derivative(b.p, b.q, x) / detail::beta_mass(b, dist.cutoff()) / s;
}

/// E[f(eta) 1{lo <= eta < hi}] (not renormalized to the window).
template <class F>
double expect_window(const TransmittanceDistribution& dist, F&& f, double lo, double hi,
                     const QuadratureSpec& spec = {}) {
    if (const auto* d = std::get_if<DiracLaw>(&dist.law())) {
        return (d->eta >= lo && d->eta < hi) ? f(d->eta) : 0.0;
    }
    if (const auto* e = std::get_if<EmpiricalLaw>(&dist.law())) {
        double sum = 0.0;
        for (const auto& bin : e->bins) {
            if (bin.eta >= lo && bin.eta < hi) sum += bin.weight * f(bin.eta);
        }
        return sum;
    }
    const double s = dist.eta_det();
    return detail::continuous_window(dist, f, lo / s, hi / s, spec);
}

/// E[f(eta)] under the PDT.
template <class F>
double expect(const TransmittanceDistribution& dist, F&& f, const QuadratureSpec& spec = {}) {
    return expect_window(dist, std::forward<F>(f), -std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), spec);
}

/// <eta^k>; equivalently <T^(2k)> with T = sqrt(eta).
inline double moment(const TransmittanceDistribution& dist, double k) {
    detail::require(k >= 0.0, "moment: order must be >= 0");
    if (k == 0.0) return 1.0;
    if (const auto* d = std::get_if<DiracLaw>(&dist.law())) return std::pow(d->eta, k);
    if (const auto* e = std::get_if<EmpiricalLaw>(&dist.law())) {
        double sum = 0.0;
        for (const auto& bin : e->bins) sum += bin.weight * std::pow(bin.eta, k);
        return sum;
    }
    const double scale_factor = std::pow(dist.eta_det(), k);
    const double c = dist.cutoff();
    if (const auto* l = std::get_if<LogNormalLaw>(&dist.law())) {
        // E[e^{kY}; a <= Y <= b] = e^{k mu + k^2 sigma^2 / 2} * P(a - k sigma <= Z <= b - k sigma)
        const auto [lo, hi] = detail::lognormal_bounds(*l, c);
        const double shift = k * l->sigma;
        const double log_ratio = k * l->mu + 0.5 * shift * shift +
                                 std::log(detail::normal_mass(lo - shift, hi - shift)) -
                                 std::log(detail::normal_mass(lo, hi));
        return scale_factor * std::exp(log_ratio);
    }
    const auto& b = std::get<BetaLaw>(dist.law());
    const double log_beta_ratio =
        std::lgamma(b.p + k) - std::lgamma(b.p) + std::lgamma(b.p + b.q) - std::lgamma(b.p + b.q + k);
    double value = std::exp(log_beta_ratio);
    if (c > 0.0) value *= boost::math::ibetac(b.p + k, b.q, c) / boost::math::ibetac(b.p, b.q, c);
    return scale_factor * value;
}

inline double mean(const TransmittanceDistribution& dist) { return moment(dist, 1.0); }

/// <eta^2> - <eta>^2, clamped at zero against round-off.
inline double variance(const TransmittanceDistribution& dist) {
    if (dist.is_degenerate()) return 0.0;
    const double m1 = moment(dist, 1.0);
    return std::max(0.0, moment(dist, 2.0) - m1 * m1);
}

/// P(eta >= x).
inline double survival(const TransmittanceDistribution& dist, double x) {
    if (const auto* d = std::get_if<DiracLaw>(&dist.law())) return d->eta >= x ? 1.0 : 0.0;
    if (const auto* e = std::get_if<EmpiricalLaw>(&dist.law())) {
        double sum = 0.0;
        for (const auto& bin : e->bins) {
            if (bin.eta >= x) sum += bin.weight;
        }
        return sum;
    }
    const double raw = x / dist.eta_det();
    const double c = dist.cutoff();
    if (raw <= c) return 1.0;
    if (raw >= 1.0) return 0.0;
    return detail::raw_mass(dist.law(), raw) / detail::raw_mass(dist.law(), c);
}

/// Distribution of eta * eta_det.
inline TransmittanceDistribution scale(const TransmittanceDistribution& dist, double eta_det) {
    detail::require(eta_det > 0.0 && eta_det <= 1.0, "scale: eta_det must lie in (0, 1]");
    TransmittanceDistribution out = dist;
    if (auto* d = std::get_if<DiracLaw>(&out.law_)) {
        d->eta *= eta_det;
    } else if (auto* e = std::get_if<EmpiricalLaw>(&out.law_)) {
        for (auto& bin : e->bins) bin.eta *= eta_det;
    } else {
        out.eta_det_ *= eta_det;
    }
    return out;
}

/// Renormalized restriction of the PDT to eta >= threshold.
inline TransmittanceDistribution truncate(const TransmittanceDistribution& dist,
                                          const SelectionPolicy& policy) {
    const double t = policy.threshold;
    detail::require(t >= 0.0 && t < 1.0, "truncate: threshold must lie in [0, 1)");
    const double surviving = survival(dist, t);
    if (!(surviving > 0.0)) {
        throw EmptySelectionError("truncate: no probability mass at eta >= " + std::to_string(t) +
                                      " (surviving mass " + std::to_string(surviving) + ")",
                                  surviving);
    }
    TransmittanceDistribution out = dist;
    if (std::holds_alternative<DiracLaw>(out.law_)) return out;
    if (auto* e = std::get_if<EmpiricalLaw>(&out.law_)) {
        std::vector<EmpiricalBin> kept;
        for (const auto& bin : e->bins) {
            if (bin.eta >= t) kept.push_back(bin);
        }
        return TransmittanceDistribution::empirical(std::move(kept));
    }
    out.cutoff_ = std::max(out.cutoff_, t / out.eta_det_);
    return out;
}

/// Draws one transmittance value.
inline double sample_one(const TransmittanceDistribution& dist, CounterRng& rng) {
    if (const auto* d = std::get_if<DiracLaw>(&dist.law())) return d->eta;
    if (const auto* e = std::get_if<EmpiricalLaw>(&dist.law())) {
        const double u = rng.uniform();
        double cumulative = 0.0;
        for (const auto& bin : e->bins) {
            cumulative += bin.weight;
            if (u < cumulative) return bin.eta;
        }
        return e->bins.back().eta;
    }
    const double s = dist.eta_det();
    const double c = dist.cutoff();
    if (const auto* l = std::get_if<LogNormalLaw>(&dist.law())) {
        // Inverse CDF of the standard normal restricted to [lo, hi].
        const auto [lo, hi] = detail::lognormal_bounds(*l, c);
        const double u = rng.uniform();
        double z = 0.0;
        if (lo >= 0.0) {
            const double upper = detail::normal_sf(lo);
            z = detail::normal_sf_inv(upper - u * (upper - detail::normal_sf(hi)));
        } else {
            const double lower = detail::normal_cdf(lo);
            const double p = lower + u * detail::normal_mass(lo, hi);
            z = p < 0.5 ? detail::normal_cdf_inv(p) : detail::normal_sf_inv(1.0 - p);
        }
        z = std::clamp(z, lo, hi);
        return s * std::min(1.0, std::exp(l->mu + l->sigma * z));
    }
    const auto& b = std::get<BetaLaw>(dist.law());
    const double mass = detail::beta_mass(b, c);
    if (mass >= 0.05) {
        while (true) {
            const double g1 = rng.gamma(b.p);
            const double g2 = rng.gamma(b.q);
            const double x = g1 / (g1 + g2);
            if (x >= c) return s * x;
        }
    }
    return s * boost::math::ibetac_inv(b.p, b.q, rng.uniform() * mass);
}

/// n i.i.d. samples of eta.
inline std::vector<double> sample(const TransmittanceDistribution& dist, std::size_t n,
                                  RandomSource source) {
    detail::require(n >= 1, "sample: n must be >= 1");
    CounterRng rng(source);
    std::vector<double> out(n);
    for (auto& v : out) v = sample_one(dist, rng);
    return out;
}

// ---------------------------------------------------------------------------
// Two-mode PDTs

struct ProductJoint {
    TransmittanceDistribution a;
    TransmittanceDistribution b;
};

struct PerfectlyCorrelatedJoint {
    TransmittanceDistribution shared;
};

/// Independent raw channels; the better one is attenuated to the worse,
/// so both modes see min(eta_a, eta_b).
struct AdaptiveCorrelatedJoint {
    TransmittanceDistribution a;
    TransmittanceDistribution b;
};

class JointTransmittanceDistribution {
  public:
    using Variant = std::variant<ProductJoint, PerfectlyCorrelatedJoint, AdaptiveCorrelatedJoint>;

    static JointTransmittanceDistribution product(TransmittanceDistribution a, TransmittanceDistribution b) {
        return JointTransmittanceDistribution(ProductJoint{std::move(a), std::move(b)});
    }
    static JointTransmittanceDistribution perfectly_correlated(TransmittanceDistribution d) {
        return JointTransmittanceDistribution(PerfectlyCorrelatedJoint{std::move(d)});
    }
    static JointTransmittanceDistribution adaptive_correlated(TransmittanceDistribution a,
                                                              TransmittanceDistribution b) {
        return JointTransmittanceDistribution(AdaptiveCorrelatedJoint{std::move(a), std::move(b)});
    }

    [[nodiscard]] const Variant& variant() const noexcept { return v_; }

    /// Smallest transmittance each mode can see.
    [[nodiscard]] std::pair<double, double> support_lower() const {
        return std::visit(
            [](const auto& j) -> std::pair<double, double> {
                using J = std::decay_t<decltype(j)>;
                if constexpr (std::is_same_v<J, PerfectlyCorrelatedJoint>) {
                    return {j.shared.support_lower(), j.shared.support_lower()};
                } else if constexpr (std::is_same_v<J, ProductJoint>) {
                    return {j.a.support_lower(), j.b.support_lower()};
                } else {
                    const double m = std::min(j.a.support_lower(), j.b.support_lower());
                    return {m, m};
                }
            },
            v_);
    }

  private:
    explicit JointTransmittanceDistribution(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Adaptive-correlation strategy: pair of independent raw channels mapped
/// onto a common transmittance min(eta_a, eta_b).
inline JointTransmittanceDistribution adaptive_correlate(const TransmittanceDistribution& a,
                                                         const TransmittanceDistribution& b) {
    if (a.is_degenerate() && b.is_degenerate()) {
        return JointTransmittanceDistribution::perfectly_correlated(
            TransmittanceDistribution::dirac(std::min(a.support_lower(), b.support_lower())));
    }
    return JointTransmittanceDistribution::adaptive_correlated(a, b);
}

/// E[F(eta_a, eta_b)] under the two-mode PDT.
template <class F>
double expect(const JointTransmittanceDistribution& joint, F&& f, const QuadratureSpec& spec = {}) {
    return std::visit(
        [&](const auto& j) -> double {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, ProductJoint>) {
                return expect(
                    j.a, [&](double x) { return expect(j.b, [&](double y) { return f(x, y); }, spec); },
                    spec);
            } else if constexpr (std::is_same_v<J, PerfectlyCorrelatedJoint>) {
                return expect(j.shared, [&](double x) { return f(x, x); }, spec);
            } else {
                // E[g(min(A, B))] = E_A[ E_B[g(B); B < A] + g(A) P(B >= A) ]
                // An atomic inner law would make the outer integrand jump, so
                // atomic laws go outside (min is symmetric).
                const bool swap = j.b.is_atomic() && !j.a.is_atomic();
                const TransmittanceDistribution& outer = swap ? j.b : j.a;
                const TransmittanceDistribution& inner = swap ? j.a : j.b;
                auto diagonal = [&](double x) { return f(x, x); };
                return expect(
                    outer,
                    [&](double x) {
                        return expect_window(inner, diagonal, -std::numeric_limits<double>::infinity(), x,
                                             spec) +
                               diagonal(x) * survival(inner, x);
                    },
                    spec);
            }
        },
        joint.variant());
}

/// <T_a^j T_b^k> with T = sqrt(eta).
inline double joint_moment(const JointTransmittanceDistribution& joint, double j, double k,
                           const QuadratureSpec& spec = {}) {
    detail::require(j >= 0.0 && k >= 0.0, "joint_moment: orders must be >= 0");
    if (const auto* p = std::get_if<ProductJoint>(&joint.variant())) {
        return moment(p->a, 0.5 * j) * moment(p->b, 0.5 * k);
    }
    if (const auto* c = std::get_if<PerfectlyCorrelatedJoint>(&joint.variant())) {
        return moment(c->shared, 0.5 * (j + k));
    }
    if (j + k == 0.0) return 1.0;
    const double order = 0.5 * (j + k);
    return expect(joint, [order](double x, double) { return std::pow(x, order); }, spec);
}

/// Applies a per-mode map to the one-mode laws underlying a joint PDT.
template <class Map>
JointTransmittanceDistribution map_marginals(const JointTransmittanceDistribution& joint, Map&& map) {
    return std::visit(
        [&](const auto& j) -> JointTransmittanceDistribution {
            using J = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<J, ProductJoint>) {
                return JointTransmittanceDistribution::product(map(j.a), map(j.b));
            } else if constexpr (std::is_same_v<J, PerfectlyCorrelatedJoint>) {
                return JointTransmittanceDistribution::perfectly_correlated(map(j.shared));
            } else {
                return adaptive_correlate(map(j.a), map(j.b));
            }
        },
        joint.variant());
}

/// Selection applied to each channel independently.
inline JointTransmittanceDistribution truncate(const JointTransmittanceDistribution& joint,
                                               const SelectionPolicy& policy) {
    return map_marginals(joint, [&](const TransmittanceDistribution& d) { return truncate(d, policy); });
}

inline JointTransmittanceDistribution scale(const JointTransmittanceDistribution& joint, double eta_det) {
    return map_marginals(joint, [&](const TransmittanceDistribution& d) { return scale(d, eta_det); });
}

/// n i.i.d. samples of (eta_a, eta_b).
inline std::vector<std::pair<double, double>> sample(const JointTransmittanceDistribution& joint,
                                                     std::size_t n, RandomSource source) {
    detail::require(n >= 1, "sample: n must be >= 1");
    CounterRng rng_a(source.substream(0));
    CounterRng rng_b(source.substream(1));
    std::vector<std::pair<double, double>> out(n);
    for (auto& [x, y] : out) {
        std::visit(
            [&](const auto& j) {
                using J = std::decay_t<decltype(j)>;
                if constexpr (std::is_same_v<J, ProductJoint>) {
                    x = sample_one(j.a, rng_a);
                    y = sample_one(j.b, rng_b);
                } else if constexpr (std::is_same_v<J, PerfectlyCorrelatedJoint>) {
                    x = y = sample_one(j.shared, rng_a);
                } else {
                    x = y = std::min(sample_one(j.a, rng_a), sample_one(j.b, rng_b));
                }
            },
            joint.variant());
    }
    return out;
}

}  // namespace atmq
