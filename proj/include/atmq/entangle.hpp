#pragma once

// Gaussian entanglement certifiers (Simon 4x4, DGCZ 2x2) and their
// transfer through fluctuating-loss channels.
//
// Moment matrices keep, for every entry, the pair of operators whose
// central moment <DX DY> it holds. Partial transposition is then a label
// rewrite: the transpose acts on mode b as b <-> b^dag with the order of
// b-operators reversed, and entries are re-read from the moments.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "atmq/channel.hpp"
#include "atmq/errors.hpp"
#include "atmq/pdt.hpp"
#include "atmq/states.hpp"

namespace atmq {

enum class Op { a, adag, b, bdag };

inline Op dagger(Op op) {
    switch (op) {
        case Op::a: return Op::adag;
        case Op::adag: return Op::a;
        case Op::b: return Op::bdag;
        case Op::bdag: return Op::b;
    }
    return op;
}

inline bool is_mode_b(Op op) { return op == Op::b || op == Op::bdag; }

/// <DX DY> for the operator pair (x, y).
inline Complex central_moment(const TwoModeMoments& m, Op x, Op y) {
    auto same_mode = [](Op l, Op r, double n, Complex sq, Op ann, Op cre) -> Complex {
        if (l == cre && r == ann) return n;
        if (l == ann && r == cre) return n + 1.0;
        if (l == ann && r == ann) return sq;
        return std::conj(sq);
    };
    if (!is_mode_b(x) && !is_mode_b(y)) return same_mode(x, y, m.n_a, m.a2, Op::a, Op::adag);
    if (is_mode_b(x) && is_mode_b(y)) return same_mode(x, y, m.n_b, m.b2, Op::b, Op::bdag);
    // Cross-mode operators commute.
    const Op on_a = is_mode_b(x) ? y : x;
    const Op on_b = is_mode_b(x) ? x : y;
    if (on_a == Op::a && on_b == Op::b) return m.ab;
    if (on_a == Op::adag && on_b == Op::bdag) return std::conj(m.ab);
    if (on_a == Op::adag && on_b == Op::b) return m.adag_b;
    return std::conj(m.adag_b);
}

class MomentMatrix {
  public:
    using Label = std::pair<Op, Op>;

    MomentMatrix(TwoModeMoments source, std::vector<std::vector<Label>> labels)
        : source_(std::move(source)), labels_(std::move(labels)) {}

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const Label& label(std::size_t row, std::size_t col) const { return labels_[row][col]; }
    [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
        const auto& [x, y] = labels_[row][col];
        return central_moment(source_, x, y);
    }
    [[nodiscard]] const TwoModeMoments& source() const { return source_; }

    [[nodiscard]] Eigen::MatrixXcd values() const {
        const auto n = static_cast<Eigen::Index>(size());
        Eigen::MatrixXcd out(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out(i, j) = (*this)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
        return out;
    }

    [[nodiscard]] double determinant() const { return values().determinant().real(); }

  private:
    TwoModeMoments source_;
    std::vector<std::vector<Label>> labels_;
};

/// Entry (i, j) holds <D xi_i^dag D xi_j> with xi = (a, a^dag, b, b^dag).
inline MomentMatrix simon_matrix(const TwoModeMoments& state) {
    const Op xi[4] = {Op::a, Op::adag, Op::b, Op::bdag};
    std::vector<std::vector<MomentMatrix::Label>> labels(4, std::vector<MomentMatrix::Label>(4));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) labels[i][j] = {dagger(xi[i]), xi[j]};
    }
    return MomentMatrix(state, std::move(labels));
}

inline MomentMatrix dgcz_matrix(const TwoModeMoments& state) {
    return MomentMatrix(state, {{{Op::adag, Op::a}, {Op::adag, Op::b}}, {{Op::a, Op::bdag}, {Op::bdag, Op::b}}});
}

inline MomentMatrix partial_transpose(const MomentMatrix& m) {
    auto flip = [](Op op) { return is_mode_b(op) ? dagger(op) : op; };
    std::vector<std::vector<MomentMatrix::Label>> labels(m.size(), std::vector<MomentMatrix::Label>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            auto [x, y] = m.label(i, j);
            if (is_mode_b(x) && is_mode_b(y)) std::swap(x, y);
            labels[i][j] = {flip(x), flip(y)};
        }
    }
    return MomentMatrix(m.source(), std::move(labels));
}

enum class Criterion { simon, dgcz };

/// Values within this distance of zero are reported as indeterminate.
inline constexpr double kCertifierEpsilon = 1e-12;

struct CertifierResult {
    double value = 0.0;
    Criterion criterion = Criterion::dgcz;
    bool entangled = false;
    bool indeterminate = false;
};

inline CertifierResult make_certifier_result(double value, Criterion criterion) {
    return {value, criterion, value < -kCertifierEpsilon, std::abs(value) <= kCertifierEpsilon};
}

/// <Da^dag Da><Db^dag Db> - <Da Db><Da^dag Db^dag>.
inline CertifierResult dgcz_certifier(const TwoModeMoments& state) {
    return make_certifier_result(partial_transpose(dgcz_matrix(state)).determinant(), Criterion::dgcz);
}

inline CertifierResult simon_certifier(const TwoModeMoments& state) {
    return make_certifier_result(partial_transpose(simon_matrix(state)).determinant(), Criterion::simon);
}

/// Physical states have a positive semidefinite Simon matrix (it is the Gram
/// matrix of the fluctuation operators).
inline bool is_physical(const TwoModeMoments& state, double tolerance = 1e-10) {
    const Eigen::Matrix4cd v = simon_matrix(state).values();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(v, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tolerance;
}

/// The terms of the DGCZ transfer relation
/// W_out = <T_a^2><T_b^2> W_in + N + nu^dag S nu + mu^dag F mu.
struct DgczTransfer {
    double deterministic = 0.0;
    double n = 0.0;
    Eigen::Matrix2cd s;
    Eigen::Matrix2cd f;
    double s_term = 0.0;
    double f_term = 0.0;

    [[nodiscard]] double total() const { return deterministic + n + s_term + f_term; }
};

inline DgczTransfer dgcz_transfer_terms(const TwoModeMoments& state, const TransmissionMoments& t) {
    const double w_in = dgcz_certifier(state).value;
    const Complex ab = state.ab;
    const double fa = t.var_a();
    const double fb = t.var_b();
    const double fab = t.cov_ab();

    DgczTransfer out;
    out.deterministic = t.t2_a * t.t2_b * w_in;
    out.n = (t.t2_a * t.t2_b - t.t_ab * t.t_ab) * std::norm(ab);

    Eigen::Matrix2cd moments;
    moments << t.t2_b * state.n_b, -t.t_ab * ab, -t.t_ab * std::conj(ab), t.t2_a * state.n_a;
    Eigen::Matrix2cd fluctuations;
    fluctuations << fa, fab, fab, fb;
    out.s = moments.cwiseProduct(fluctuations);
    out.f = 0.5 * (fa * fb - fab * fab) * Eigen::Matrix2cd::Identity();

    Eigen::Vector2cd nu(state.mean_a, std::conj(state.mean_b));
    Eigen::Vector2cd mu(state.mean_a * state.mean_b, std::conj(state.mean_a) * std::conj(state.mean_b));
    out.s_term = (nu.adjoint() * out.s * nu)(0, 0).real();
    out.f_term = (mu.adjoint() * out.f * mu)(0, 0).real();
    return out;
}

/// Closed-form DGCZ certifier at the receiver.
inline CertifierResult dgcz_out_closed(const TwoModeMoments& state, const JointTransmittanceDistribution& joint,
                                       const QuadratureSpec& spec = {}) {
    return make_certifier_result(dgcz_transfer_terms(state, transmission_moments(joint, spec)).total(),
                                 Criterion::dgcz);
}

/// Quadratic form in the displacement (d_a, d_b^*) built from the central
/// moments of `state`; its sign decides whether correlated channels can
/// degrade entanglement.
inline double displacement_form(const TwoModeMoments& state, Complex d_a, Complex d_b) {
    return state.n_b * std::norm(d_a) + state.n_a * std::norm(d_b) -
           2.0 * (std::conj(state.ab) * d_a * d_b).real();
}

/// DGCZ certifier behind perfectly correlated channels (T_a = T_b = T):
/// W_out = <T^2>^2 W_in + <DT^2><T^2> * displacement_form.
inline CertifierResult dgcz_out_correlated(const TwoModeMoments& state, const TransmittanceDistribution& dist) {
    const double t = moment(dist, 0.5);
    const double t2 = moment(dist, 1.0);
    const double fluct = dist.is_degenerate() ? 0.0 : t2 - t * t;
    const double w_in = dgcz_certifier(state).value;
    return make_certifier_result(
        t2 * t2 * w_in + fluct * t2 * displacement_form(state, state.mean_a, state.mean_b), Criterion::dgcz);
}

/// True when displacements (d_a, d_b) keep a DGCZ-entangled state entangled
/// through any perfectly correlated channel.
inline bool preservation_domain(const TwoModeMoments& state, Complex d_a, Complex d_b) {
    if (!dgcz_certifier(state).entangled) {
        throw InvalidArgument("preservation_domain: input state is not DGCZ-entangled");
    }
    return displacement_form(state, d_a, d_b) <= 0.0;
}

struct DomainPoint {
    double d_a = 0.0;
    double d_b = 0.0;
    double xi = 0.0;
    bool preserved = false;
};

/// Real-displacement scan of the preservation domain of TMSV states over a
/// square grid with `count` points per axis on [lo, hi].
inline std::vector<DomainPoint> domain_scan(const std::vector<double>& xis, double lo, double hi,
                                            std::size_t count) {
    detail::require(count >= 2 && lo < hi, "domain_scan: need count >= 2 and lo < hi");
    std::vector<DomainPoint> out;
    out.reserve(xis.size() * count * count);
    for (double xi : xis) {
        const TwoModeMoments state = tmsv(SqueezeParameter(xi));
        for (std::size_t i = 0; i < count; ++i) {
            const double da = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
            for (std::size_t j = 0; j < count; ++j) {
                const double db = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(count - 1);
                out.push_back({da, db, xi, preservation_domain(state, da, db)});
            }
        }
    }
    return out;
}

}  // namespace atmq
