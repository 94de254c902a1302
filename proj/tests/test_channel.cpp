#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "atmq/channel.hpp"
#include "support/oracles.hpp"

using namespace atmq;
using Catch::Approx;

namespace {

double max_diff(const TwoModeMoments& x, const TwoModeMoments& y) {
    double d = 0.0;
    d = std::max(d, std::abs(x.mean_a - y.mean_a));
    d = std::max(d, std::abs(x.mean_b - y.mean_b));
    d = std::max(d, std::abs(x.n_a - y.n_a));
    d = std::max(d, std::abs(x.n_b - y.n_b));
    d = std::max(d, std::abs(x.a2 - y.a2));
    d = std::max(d, std::abs(x.b2 - y.b2));
    d = std::max(d, std::abs(x.ab - y.ab));
    d = std::max(d, std::abs(x.adag_b - y.adag_b));
    return d;
}

TwoModeMoments generic_state() {
    TwoModeMoments m;
    m.mean_a = {0.7, -0.4};
    m.mean_b = {-0.2, 1.1};
    m.n_a = 0.9;
    m.n_b = 0.6;
    m.a2 = {0.2, 0.1};
    m.b2 = {-0.1, 0.05};
    m.ab = {0.5, 0.2};
    m.adag_b = {0.1, -0.15};
    return m;
}

}  // namespace

TEST_CASE("attenuate_moment examples", "[channel]") {
    const Complex v{2.0, -1.0};
    CHECK(std::abs(attenuate_moment(v, {1, 1}, TransmittanceDistribution::dirac(0.3)) - 0.3 * v) < 1e-15);
    CHECK(attenuate_moment(v, {0, 0}, TransmittanceDistribution::beta(2, 3)) == v);
    CHECK(std::abs(attenuate_moment(v, {1, 0}, TransmittanceDistribution::beta(1, 1)) - (2.0 / 3.0) * v) < 1e-14);
    CHECK_THROWS_AS(MomentOrder(-1, 0), InvalidArgument);
}

TEST_CASE("lossless channel and vacuum are fixed points", "[channel]") {
    const auto state = generic_state();
    const auto lossless = JointTransmittanceDistribution::perfectly_correlated(TransmittanceDistribution::dirac(1.0));
    CHECK(max_diff(transform_two_mode(state, lossless), state) == 0.0);

    const TwoModeMoments vacuum{};
    for (const auto& j : {JointTransmittanceDistribution::product(TransmittanceDistribution::beta(2, 2),
                                                                  TransmittanceDistribution::lognormal(-1, 0.5)),
                          adaptive_correlate(TransmittanceDistribution::beta(1, 3), TransmittanceDistribution::beta(2, 1))}) {
        CHECK(max_diff(transform_two_mode(vacuum, j), vacuum) < 1e-16);
    }
}

TEST_CASE("deterministic losses reproduce the beam-splitter formulas", "[channel]") {
    const auto state = generic_state();
    const double ea = 0.3;
    const double eb = 0.65;
    const auto out = transform_two_mode(
        state, JointTransmittanceDistribution::product(TransmittanceDistribution::dirac(ea), TransmittanceDistribution::dirac(eb)));
    CHECK(std::abs(out.mean_a - std::sqrt(ea) * state.mean_a) < 1e-15);
    CHECK(std::abs(out.n_a - ea * state.n_a) < 1e-15);
    CHECK(std::abs(out.n_b - eb * state.n_b) < 1e-15);
    CHECK(std::abs(out.a2 - ea * state.a2) < 1e-15);
    CHECK(std::abs(out.ab - std::sqrt(ea * eb) * state.ab) < 1e-15);
    CHECK(std::abs(out.adag_b - std::sqrt(ea * eb) * state.adag_b) < 1e-15);
}

TEST_CASE("deterministic losses compose multiplicatively", "[channel]") {
    const auto state = generic_state();
    auto through = [](const TwoModeMoments& s, double e1, double e2) {
        return transform_two_mode(s, JointTransmittanceDistribution::product(TransmittanceDistribution::dirac(e1),
                                                                             TransmittanceDistribution::dirac(e2)));
    };
    const auto twice = through(through(state, 0.4, 0.7), 0.5, 0.9);
    const auto once = through(state, 0.2, 0.63);
    CHECK(max_diff(twice, once) < 1e-12);
}

TEST_CASE("mean photon number never grows", "[channel]") {
    const auto state = generic_state();
    for (const auto& d : {TransmittanceDistribution::beta(2, 5), TransmittanceDistribution::lognormal(-0.3, 1.0),
                          TransmittanceDistribution::empirical({{0.1, 1}, {0.95, 3}})}) {
        const auto out = transform_two_mode(state, JointTransmittanceDistribution::perfectly_correlated(d));
        CHECK(out.n_a + std::norm(out.mean_a) <= state.n_a + std::norm(state.mean_a));
        CHECK(out.n_b + std::norm(out.mean_b) <= state.n_b + std::norm(state.mean_b));
    }
}

TEST_CASE("fluctuating-loss transfer matches a Monte Carlo mixture of deterministic losses", "[channel]") {
    const auto state = tmsv(SqueezeParameter(0.6), {0.8, 0.3}, {-0.5, 1.2});
    const auto b22 = TransmittanceDistribution::beta(2, 2);
    const std::vector<JointTransmittanceDistribution> joints{
        JointTransmittanceDistribution::product(b22, b22),
        JointTransmittanceDistribution::perfectly_correlated(TransmittanceDistribution::lognormal(-0.8, 0.7)),
        adaptive_correlate(b22, TransmittanceDistribution::beta(3, 1)),
    };
    std::uint64_t stream = 0;
    for (const auto& joint : joints) {
        const auto out = transform_two_mode(state, joint);
        const auto draws = sample(joint, 1000000, {314, stream++});
        // Conditional non-central moments for fixed (eta_a, eta_b).
        using Getter = std::function<Complex(double, double)>;
        const Complex al = state.mean_a;
        const Complex be = state.mean_b;
        const std::vector<std::pair<Getter, Complex>> checks{
            {[&](double ta, double) { return ta * al; }, out.mean_a},
            {[&](double, double tb) { return tb * be; }, out.mean_b},
            {[&](double ta, double) { return ta * ta * (state.n_a + std::norm(al)); }, out.n_a + std::norm(out.mean_a)},
            {[&](double, double tb) { return tb * tb * (state.n_b + std::norm(be)); }, out.n_b + std::norm(out.mean_b)},
            {[&](double ta, double) { return ta * ta * (state.a2 + al * al); }, out.a2 + out.mean_a * out.mean_a},
            {[&](double, double tb) { return tb * tb * (state.b2 + be * be); }, out.b2 + out.mean_b * out.mean_b},
            {[&](double ta, double tb) { return ta * tb * (state.ab + al * be); }, out.ab + out.mean_a * out.mean_b},
            {[&](double ta, double tb) { return ta * tb * (state.adag_b + std::conj(al) * be); },
             out.adag_b + std::conj(out.mean_a) * out.mean_b},
        };
        for (std::size_t c = 0; c < checks.size(); ++c) {
            std::vector<double> re(draws.size());
            std::vector<double> im(draws.size());
            for (std::size_t i = 0; i < draws.size(); ++i) {
                const Complex v = checks[c].first(std::sqrt(draws[i].first), std::sqrt(draws[i].second));
                re[i] = v.real();
                im[i] = v.imag();
            }
            INFO("joint " << stream - 1 << " moment " << c);
            CHECK(oracle::within(oracle::estimate(re), checks[c].second.real()));
            CHECK(oracle::within(oracle::estimate(im), checks[c].second.imag()));
        }
    }
}

TEST_CASE("single-mode transfer agrees with the two-mode transfer", "[channel]") {
    const SingleModeGaussian in{{0.4, 0.9}, 0.3, {-0.2, 0.25}};
    const auto d = TransmittanceDistribution::beta(3, 2);
    const auto out = transform_single_mode(in, d);
    TwoModeMoments two;
    two.mean_a = in.mean;
    two.n_a = in.n_central;
    two.a2 = in.a2_central;
    const auto out2 = transform_two_mode(two, JointTransmittanceDistribution::product(d, TransmittanceDistribution::dirac(1)));
    CHECK(std::abs(out.mean - out2.mean_a) < 1e-15);
    CHECK(std::abs(out.n_central - out2.n_a) < 1e-15);
    CHECK(std::abs(out.a2_central - out2.a2) < 1e-15);
}

TEST_CASE("characteristic function examples", "[channel]") {
    const auto beta11 = TransmittanceDistribution::beta(1, 1);
    auto vacuum = [](Complex) { return Complex(1.0, 0.0); };
    for (Complex b : {Complex(0, 0), Complex(0.3, -1.2)}) CHECK(std::abs(characteristic_out(vacuum, beta11, b) - 1.0) < 1e-14);

    const Complex a0{0.6, -0.8};
    auto coherent_in = [a0](Complex b) { return std::exp(b * std::conj(a0) - std::conj(b) * a0); };
    const double eta0 = 0.36;
    for (Complex b : {Complex(0.5, 0.2), Complex(-1.0, 0.7)}) {
        const Complex got = characteristic_out(coherent_in, TransmittanceDistribution::dirac(eta0), b);
        const Complex a1 = std::sqrt(eta0) * a0;
        CHECK(std::abs(got - std::exp(b * std::conj(a1) - std::conj(b) * a1)) < 1e-14);
    }

    const double nbar = 1.7;
    auto thermal = [nbar](Complex b) { return Complex(std::exp(-nbar * std::norm(b)), 0.0); };
    CHECK(std::abs(characteristic_out(thermal, beta11, 1.0) - (1.0 - std::exp(-nbar)) / nbar) < 1e-12);
    CHECK(std::abs(characteristic_out(thermal, beta11, 0.0) - 1.0) < 1e-15);
}

TEST_CASE("second derivatives of the output characteristic function give attenuated moments", "[channel]") {
    // Gaussian C(beta) = exp(beta a* - beta* a) exp(-n |beta|^2 + (m* beta^2 + m beta*^2) / 2)
    const Complex alpha{0.5, 0.3};
    const double n = 0.4;
    const Complex m{0.15, -0.1};
    auto c_in = [&](Complex b) {
        return std::exp(b * std::conj(alpha) - std::conj(b) * alpha - n * std::norm(b) +
                        0.5 * (std::conj(m) * b * b + m * std::conj(b) * std::conj(b)));
    };
    const auto d = TransmittanceDistribution::beta(2, 3);
    const QuadratureSpec tight{1e-13, 1e-16, 50};
    // <a^dag a> = -d^2 C / d beta d beta* at 0; use real/imag parts: d/dbeta d/dbeta* = (1/4) Laplacian.
    const double h = 1e-3;
    auto c_out = [&](double x, double y) { return characteristic_out(c_in, d, Complex(x, y), tight); };
    const Complex lap = (c_out(h, 0) + c_out(-h, 0) + c_out(0, h) + c_out(0, -h) - 4.0 * c_out(0, 0)) / (h * h);
    const double n_nc_out = -0.25 * lap.real();
    const double expected = attenuate_moment(n + std::norm(alpha), {1, 1}, d).real();
    CHECK(n_nc_out == Approx(expected).epsilon(1e-5));
}
