#pragma once

// Fluctuating-loss input-output relations. Each mode passes a beam splitter
// a_out = T a_in + sqrt(1 - T^2) c_vac with a random transmission
// coefficient T = sqrt(eta).

#include <complex>
#include <utility>

#include "atmq/numerics.hpp"
#include "atmq/pdt.hpp"
#include "atmq/states.hpp"

namespace atmq {

struct MomentOrder {
    int n = 0;  // power of a^dag
    int m = 0;  // power of a

    MomentOrder(int creation, int annihilation) : n(creation), m(annihilation) {
        detail::require(n >= 0 && m >= 0, "MomentOrder: powers must be >= 0");
    }
};

/// <a^dag^n a^m>_out = <eta^{(n+m)/2}> <a^dag^n a^m>_in.
inline Complex attenuate_moment(Complex value, MomentOrder order, const TransmittanceDistribution& dist) {
    return moment(dist, 0.5 * (order.n + order.m)) * value;
}

/// Transmission-coefficient statistics of a joint PDT that enter the
/// second-order moment transfer.
struct TransmissionMoments {
    double t_a = 1.0;    // <T_a>
    double t_b = 1.0;    // <T_b>
    double t2_a = 1.0;   // <T_a^2>
    double t2_b = 1.0;   // <T_b^2>
    double t_ab = 1.0;   // <T_a T_b>

    [[nodiscard]] double var_a() const { return t2_a - t_a * t_a; }
    [[nodiscard]] double var_b() const { return t2_b - t_b * t_b; }
    [[nodiscard]] double cov_ab() const { return t_ab - t_a * t_b; }
};

inline TransmissionMoments transmission_moments(const JointTransmittanceDistribution& joint,
                                                const QuadratureSpec& spec = {}) {
    TransmissionMoments t;
    t.t_a = joint_moment(joint, 1, 0, spec);
    t.t_b = joint_moment(joint, 0, 1, spec);
    t.t2_a = joint_moment(joint, 2, 0, spec);
    t.t2_b = joint_moment(joint, 0, 2, spec);
    t.t_ab = joint_moment(joint, 1, 1, spec);
    return t;
}

/// First and second moments of the output mixture. Non-central moments
/// follow the normally ordered relation; central ones pick up a
/// fluctuation term proportional to the product of the input means.
inline TwoModeMoments transform_two_mode(const TwoModeMoments& in, const TransmissionMoments& t) {
    const Complex alpha = in.mean_a;
    const Complex beta = in.mean_b;
    TwoModeMoments out;
    out.mean_a = t.t_a * alpha;
    out.mean_b = t.t_b * beta;
    out.n_a = t.t2_a * in.n_a + t.var_a() * std::norm(alpha);
    out.n_b = t.t2_b * in.n_b + t.var_b() * std::norm(beta);
    out.a2 = t.t2_a * in.a2 + t.var_a() * alpha * alpha;
    out.b2 = t.t2_b * in.b2 + t.var_b() * beta * beta;
    out.ab = t.t_ab * in.ab + t.cov_ab() * alpha * beta;
    out.adag_b = t.t_ab * in.adag_b + t.cov_ab() * std::conj(alpha) * beta;
    return out;
}

inline TwoModeMoments transform_two_mode(const TwoModeMoments& in, const JointTransmittanceDistribution& joint,
                                         const QuadratureSpec& spec = {}) {
    return transform_two_mode(in, transmission_moments(joint, spec));
}

/// Single-mode version of the same transfer.
inline SingleModeGaussian transform_single_mode(const SingleModeGaussian& in,
                                                const TransmittanceDistribution& dist) {
    const double t = moment(dist, 0.5);
    const double t2 = moment(dist, 1.0);
    const double fluct = t2 - t * t;
    SingleModeGaussian out;
    out.mean = t * in.mean;
    out.n_central = t2 * in.n_central + fluct * std::norm(in.mean);
    out.a2_central = t2 * in.a2_central + fluct * in.mean * in.mean;
    return out;
}

/// C_out(beta) = <C_in(sqrt(eta) beta)> for a normally ordered
/// characteristic function C_in.
template <class CharFn>
Complex characteristic_out(CharFn&& c_in, const TransmittanceDistribution& dist, Complex beta,
                           const QuadratureSpec& spec = {}) {
    const double re = expect(dist, [&](double eta) { return std::real(c_in(std::sqrt(eta) * beta)); }, spec);
    const double im = expect(dist, [&](double eta) { return std::imag(c_in(std::sqrt(eta) * beta)); }, spec);
    return {re, im};
}

}  // namespace atmq
