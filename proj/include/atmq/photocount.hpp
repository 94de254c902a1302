#pragma once

// Photocounting statistics behind a fluctuating-loss channel.
//
// Detection efficiency is folded into the transmittance, eta_eff = eta_c * eta,
// everywhere in this header, including the closed-form Mandel relation and the
// sub-Poissonian intensity bound. With that convention the closed forms agree
// exactly with the Mandel parameter of the directly computed count
// distribution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "atmq/detector.hpp"
#include "atmq/errors.hpp"
#include "atmq/numerics.hpp"
#include "atmq/pdt.hpp"

namespace atmq {

/// Count probabilities p_0 ... p_N.
struct PhotonNumberDist {
    std::vector<double> p;

    [[nodiscard]] std::size_t truncation() const { return p.empty() ? 0 : p.size() - 1; }
    [[nodiscard]] double total() const {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
    }
};

/// Tail mass left beyond the truncation of every count distribution.
inline constexpr double kCountTailTarget = 1e-16;

/// Quadrature settings for count distributions; tighter than the library
/// default because the Mandel parameter subtracts nearly equal moments.
inline QuadratureSpec count_quadrature() { return {1e-12, 1e-17, 40}; }

inline double poisson_pmf(std::size_t n, double lambda) {
    if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
    const double k = static_cast<double>(n);
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

/// Smallest N with P(Poisson(lambda) > N) below `target`, using the
/// geometric bound P(X > N) <= p(N+1) / (1 - lambda / (N+2)).
inline std::size_t poisson_truncation(double lambda, double target = kCountTailTarget) {
    if (lambda == 0.0) return 0;
    auto n = static_cast<std::size_t>(std::ceil(lambda));
    while (true) {
        const double ratio = lambda / static_cast<double>(n + 2);
        const double bound = poisson_pmf(n + 1, lambda) / (1.0 - ratio);
        if (bound < target) return n;
        ++n;
    }
}

/// Q-symbol of the counting POVM: (eta_c I + nu)^n / n! exp(-eta_c I - nu).
inline double povm_qsymbol(std::size_t n, double intensity, const DetectorModel& det) {
    det.validate();
    detail::require(intensity >= 0.0, "povm_qsymbol: intensity must be >= 0");
    return poisson_pmf(n, det.efficiency * intensity + det.noise);
}

namespace detail {

inline double binomial_pmf(std::size_t k, std::size_t m, double x) {
    if (k > m) return 0.0;
    if (x <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (x >= 1.0) return k == m ? 1.0 : 0.0;
    const double kk = static_cast<double>(k);
    const double mm = static_cast<double>(m);
    const double log_choose = std::lgamma(mm + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(mm - kk + 1.0);
    return std::exp(log_choose + kk * std::log(x) + (mm - kk) * std::log1p(-x));
}

// Adds independent Poisson(nu) noise counts to a signal-count distribution.
inline PhotonNumberDist add_noise_counts(std::span<const double> signal, double nu) {
    const std::size_t extra = poisson_truncation(nu);
    PhotonNumberDist out;
    out.p.assign(signal.size() + extra, 0.0);
    std::vector<double> noise(extra + 1);
    for (std::size_t j = 0; j <= extra; ++j) noise[j] = poisson_pmf(j, nu);
    for (std::size_t k = 0; k < signal.size(); ++k) {
        for (std::size_t j = 0; j <= extra; ++j) out.p[k + j] += signal[k] * noise[j];
    }
    return out;
}

}  // namespace detail

/// Count distribution for an input photon-number distribution rho_m:
/// binomial thinning with success eta_c * eta, averaged over the PDT, plus
/// Poisson noise counts.
inline PhotonNumberDist count_distribution_fock(std::span<const double> photon_numbers,
                                                const TransmittanceDistribution& dist,
                                                const DetectorModel& det,
                                                const QuadratureSpec& spec = count_quadrature()) {
    det.validate();
    detail::require(!photon_numbers.empty(), "count_distribution_fock: empty input distribution");
    double total = 0.0;
    for (double v : photon_numbers) {
        detail::require(v >= 0.0, "count_distribution_fock: negative probability");
        total += v;
    }
    detail::require(std::abs(total - 1.0) < 1e-9, "count_distribution_fock: input must be normalized");

    const std::size_t max_m = photon_numbers.size() - 1;
    std::vector<double> signal(max_m + 1, 0.0);
    for (std::size_t k = 0; k <= max_m; ++k) {
        auto thinned = [&](double eta) {
            const double x = det.efficiency * eta;
            double sum = 0.0;
            for (std::size_t m = k; m <= max_m; ++m) {
                if (photon_numbers[m] != 0.0) sum += photon_numbers[m] * detail::binomial_pmf(k, m, x);
            }
            return sum;
        };
        signal[k] = expect(dist, thinned, spec);
    }
    return detail::add_noise_counts(signal, det.noise);
}

/// Fock-state input |m>.
inline PhotonNumberDist count_distribution_fock(std::size_t m, const TransmittanceDistribution& dist,
                                                const DetectorModel& det,
                                                const QuadratureSpec& spec = count_quadrature()) {
    std::vector<double> rho(m + 1, 0.0);
    rho[m] = 1.0;
    return count_distribution_fock(std::span<const double>(rho), dist, det, spec);
}

/// Coherent input |alpha>: PDT average of Poisson(eta_c eta |alpha|^2 + nu).
inline PhotonNumberDist count_distribution_coherent(std::complex<double> alpha,
                                                    const TransmittanceDistribution& dist,
                                                    const DetectorModel& det,
                                                    const QuadratureSpec& spec = count_quadrature()) {
    det.validate();
    const double intensity = std::norm(alpha);
    const double lambda_max = det.efficiency * dist.support_upper() * intensity + det.noise;
    const std::size_t n_max = poisson_truncation(lambda_max);
    PhotonNumberDist out;
    out.p.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        out.p[n] = expect(
            dist, [&](double eta) { return povm_qsymbol(n, eta * intensity, det); }, spec);
    }
    return out;
}

/// Q = <Dn^2> / <n> - 1.
inline double mandel_q(const PhotonNumberDist& dist) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t n = 0; n < dist.p.size(); ++n) {
        const double k = static_cast<double>(n);
        m1 += k * dist.p[n];
        m2 += k * k * dist.p[n];
    }
    if (!(m1 > 0.0)) throw SingularityError("mandel_q: undefined for zero mean count");
    return (m2 - m1 * m1) / m1 - 1.0;
}

/// Closed-form Mandel parameter at the receiver for input Mandel parameter
/// q_in and mean photon number n_in.
inline double mandel_out(double q_in, double n_in, const TransmittanceDistribution& dist,
                         const DetectorModel& det) {
    det.validate();
    detail::require(n_in >= 0.0, "mandel_out: n_in must be >= 0");
    const double c = det.efficiency;
    const double m1 = c * mean(dist);
    const double m2 = c * c * moment(dist, 2.0);
    const double var = c * c * variance(dist);
    const double denom = m1 * n_in + det.noise;
    if (!(denom > 0.0)) throw SingularityError("mandel_out: zero mean count (n_in = 0 and nu = 0)");
    return (m2 * n_in / denom) * q_in + var * n_in * n_in / denom;
}

/// Input intensity above which the received light cannot be
/// sub-Poissonian; independent of the detector. Returns +infinity for a
/// non-fluctuating channel.
inline double sub_poisson_bound(double q_in, const TransmittanceDistribution& dist) {
    detail::require(q_in < 0.0, "sub_poisson_bound: requires q_in < 0");
    const double var = variance(dist);
    if (var == 0.0) return std::numeric_limits<double>::infinity();
    return -(moment(dist, 2.0) / var) * q_in;
}

}  // namespace atmq
