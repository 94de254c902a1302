#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "atmq/pdt.hpp"
#include "support/oracles.hpp"

using namespace atmq;
using Catch::Approx;

namespace {

struct Named {
    std::string name;
    TransmittanceDistribution dist;
};

std::vector<Named> zoo() {
    return {
        {"dirac", TransmittanceDistribution::dirac(0.37)},
        {"lognormal", TransmittanceDistribution::lognormal(-1.2, 0.6)},
        {"lognormal-wide", TransmittanceDistribution::lognormal(-0.2, 1.3)},
        {"beta-uniform", TransmittanceDistribution::beta(1, 1)},
        {"beta", TransmittanceDistribution::beta(2, 5)},
        {"beta-edge", TransmittanceDistribution::beta(0.5, 0.8)},
        {"empirical", TransmittanceDistribution::empirical({{0.1, 1}, {0.45, 2}, {0.9, 1}})},
        {"scaled-beta", scale(TransmittanceDistribution::beta(2, 2), 0.12)},
        {"truncated-lognormal",
         truncate(TransmittanceDistribution::lognormal(-1.0, 0.8), {0.3, SelectionKind::preselection})},
        {"truncated-beta", truncate(TransmittanceDistribution::beta(2, 5), {0.6, SelectionKind::postselection})},
    };
}

double quad_moment(const TransmittanceDistribution& d, double k) {
    return expect(d, [k](double eta) { return std::pow(eta, k); }, {1e-12, 1e-15, 50});
}

}  // namespace

TEST_CASE("constructor preconditions", "[pdt]") {
    CHECK_THROWS_AS(TransmittanceDistribution::dirac(1.2), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::dirac(-0.1), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::lognormal(-1, 0), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::beta(0, 1), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::empirical({{1.5, 1}}), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::empirical({{0.5, -1}}), InvalidArgument);
    CHECK_THROWS_AS(TransmittanceDistribution::empirical({{0.5, 0}}), InvalidArgument);
}

TEST_CASE("density examples", "[pdt]") {
    const auto ln = TransmittanceDistribution::lognormal(-1.5, 0.9);
    CHECK(integrate([&](double x) { return density(ln, x); }, 0.0, 1.0, {1e-11, 1e-15, 50}) ==
          Approx(1.0).epsilon(1e-9));
    const auto u = TransmittanceDistribution::beta(1, 1);
    for (double x : {0.0, 0.3, 0.99}) CHECK(density(u, x) == Approx(1.0));
    CHECK(density(TransmittanceDistribution::beta(2, 5), 0.0) == 0.0);
    CHECK_THROWS_AS(density(TransmittanceDistribution::dirac(0.3), 0.3), InvalidArgument);
    CHECK_THROWS_AS(density(TransmittanceDistribution::empirical({{0.3, 1}}), 0.3), InvalidArgument);
    CHECK_THROWS_AS(density(u, 1.5), InvalidArgument);
}

TEST_CASE("densities of scaled and truncated laws stay normalized", "[pdt]") {
    const auto d = truncate(scale(TransmittanceDistribution::beta(2, 3), 0.5), {0.1, SelectionKind::preselection});
    const std::vector<double> pts{0.0, 0.1, 0.5, 1.0};
    CHECK(integrate([&](double x) { return density(d, x); }, std::span<const double>(pts)) ==
          Approx(1.0).epsilon(1e-9));
    CHECK(density(d, 0.05) == 0.0);
    CHECK(density(d, 0.7) == 0.0);
}

TEST_CASE("moment examples", "[pdt]") {
    CHECK(moment(TransmittanceDistribution::dirac(0.4), 2) == Approx(0.16).epsilon(1e-15));
    for (auto [p, q] : {std::pair{2.0, 5.0}, {1.0, 1.0}, {0.5, 3.0}}) {
        const auto b = TransmittanceDistribution::beta(p, q);
        CHECK(moment(b, 1) == Approx(p / (p + q)).epsilon(1e-13));
        CHECK(quad_moment(b, 1) == Approx(p / (p + q)).epsilon(1e-10));
    }
    CHECK(moment(TransmittanceDistribution::empirical({{0.2, 0.5}, {0.8, 0.5}}), 1) == Approx(0.5));
    CHECK(moment(TransmittanceDistribution::lognormal(-1, 1), 0) == 1.0);
    CHECK_THROWS_AS(moment(TransmittanceDistribution::beta(1, 1), -1), InvalidArgument);
}

TEST_CASE("closed-form moments match quadrature of the density", "[pdt]") {
    for (const auto& [name, d] : zoo()) {
        if (d.is_atomic()) continue;
        for (double k : {0.5, 1.0, 1.5, 2.0, 3.0}) {
            INFO(name << " k=" << k);
            CHECK(moment(d, k) == Approx(quad_moment(d, k)).epsilon(1e-10));
        }
    }
}

TEST_CASE("Monte Carlo moments agree with quadrature within 4 standard errors", "[pdt]") {
    std::uint64_t stream = 0;
    for (const auto& [name, d] : zoo()) {
        const auto draws = sample(d, 1000000, {20240601, stream++});
        for (double x : draws) REQUIRE((x >= 0.0 && x <= 1.0));
        for (double k : {0.5, 1.0, 1.5, 2.0, 3.0}) {
            std::vector<double> f(draws.size());
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(draws[i], k);
            const auto est = oracle::estimate(f);
            INFO(name << " k=" << k << " mc=" << est.mean << " se=" << est.std_error);
            CHECK(oracle::within(est, moment(d, k)));
        }
    }
}

TEST_CASE("moment properties for every variant", "[pdt]") {
    for (const auto& [name, d] : zoo()) {
        INFO(name);
        double prev = 1.0;
        for (double k : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
            const double m = moment(d, k);
            CHECK(m <= prev + 1e-15);
            CHECK(m >= 0.0);
            prev = m;
        }
        const double var = variance(d);
        CHECK(var >= 0.0);
        CHECK((var == 0.0) == d.is_degenerate());
        // <T^2> >= <T>^2 with T = sqrt(eta)
        const double t = moment(d, 0.5);
        if (d.is_degenerate()) {
            CHECK(moment(d, 1.0) == Approx(t * t).epsilon(1e-15));
        } else {
            CHECK(moment(d, 1.0) > t * t);
        }
    }
}

TEST_CASE("truncation", "[pdt]") {
    const auto u = truncate(TransmittanceDistribution::beta(1, 1), {0.5, SelectionKind::preselection});
    CHECK(mean(u) == Approx(0.75).epsilon(1e-13));
    CHECK(density(u, 0.7) == Approx(2.0).epsilon(1e-13));

    try {
        (void)truncate(TransmittanceDistribution::dirac(0.3), {0.5, SelectionKind::preselection});
        FAIL("expected EmptySelectionError");
    } catch (const EmptySelectionError& e) {
        CHECK(e.surviving_mass() == 0.0);
    }
    CHECK_THROWS_AS(truncate(TransmittanceDistribution::beta(1, 1), {1.0, SelectionKind::preselection}),
                    InvalidArgument);

    const auto ln = TransmittanceDistribution::lognormal(-1.3, 0.7);
    for (double t : {0.05, 0.2, 0.5, 0.9}) {
        const auto cut = truncate(ln, {t, SelectionKind::preselection});
        CHECK(mean(cut) > mean(ln));
        CHECK(quad_moment(cut, 1) == Approx(mean(cut)).epsilon(1e-10));
        CHECK(cut.support_lower() == Approx(t));
    }
}

TEST_CASE("repeated truncation keeps the stricter threshold", "[pdt]") {
    for (const auto& [name, d] : zoo()) {
        for (auto [t1, t2] : {std::pair{0.05, 0.2}, {0.3, 0.1}}) {
            INFO(name << " " << t1 << " " << t2);
            if (survival(d, std::max(t1, t2)) <= 0.0) continue;
            const auto twice = truncate(truncate(d, {t1}), {t2});
            const auto once = truncate(d, {std::max(t1, t2)});
            for (double k : {0.5, 1.0, 2.0}) CHECK(std::abs(moment(twice, k) - moment(once, k)) < 1e-8);
        }
    }
}

TEST_CASE("empirical truncation drops bins below the threshold", "[pdt]") {
    const auto e = TransmittanceDistribution::empirical({{0.2, 1}, {0.5, 1}, {0.8, 2}});
    const auto t = truncate(e, {0.5});
    CHECK(mean(t) == Approx((0.5 + 2 * 0.8) / 3.0));
    CHECK(survival(e, 0.5) == Approx(0.75));
}

TEST_CASE("scaling", "[pdt]") {
    const auto d = scale(TransmittanceDistribution::dirac(0.5), 0.12);
    CHECK(std::get<DiracLaw>(d.law()).eta == Approx(0.06));
    const auto b = TransmittanceDistribution::beta(2, 2);
    CHECK(moment(scale(b, 0.12), 2) == Approx(0.12 * 0.12 * moment(b, 2)).epsilon(1e-14));
    const auto same = scale(b, 1.0);
    for (double k : {0.5, 1.0, 2.0}) CHECK(moment(same, k) == moment(b, k));
    CHECK_THROWS_AS(scale(b, 0.0), InvalidArgument);
    CHECK_THROWS_AS(scale(b, 1.1), InvalidArgument);
    for (const auto& [name, dist] : zoo()) {
        INFO(name);
        for (double k : {0.5, 1.5, 3.0}) {
            CHECK(moment(scale(dist, 0.3), k) == Approx(std::pow(0.3, k) * moment(dist, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncation after scaling acts on the scaled transmittance", "[pdt]") {
    const auto d = truncate(scale(TransmittanceDistribution::beta(1, 1), 0.5), {0.25});
    // uniform on [0.25, 0.5]
    CHECK(mean(d) == Approx(0.375).epsilon(1e-13));
}

TEST_CASE("joint moments", "[pdt]") {
    const auto prod =
        JointTransmittanceDistribution::product(TransmittanceDistribution::dirac(0.25), TransmittanceDistribution::dirac(0.04));
    CHECK(joint_moment(prod, 1, 1) == Approx(0.1).epsilon(1e-15));

    const auto d = TransmittanceDistribution::lognormal(-1.0, 0.5);
    const auto corr = JointTransmittanceDistribution::perfectly_correlated(d);
    CHECK(joint_moment(corr, 1, 1) == Approx(mean(d)).epsilon(1e-14));
    CHECK(joint_moment(corr, 2, 2) >= joint_moment(corr, 2, 0) * joint_moment(corr, 0, 2));
    for (double s : {1.0, 2.0, 3.5}) {
        const double ref = joint_moment(corr, s, 0);
        for (double j : {0.0, 0.5 * s, s}) CHECK(joint_moment(corr, j, s - j) == Approx(ref).epsilon(1e-14));
    }
    const auto b1 = TransmittanceDistribution::beta(2, 3);
    const auto b2 = TransmittanceDistribution::beta(4, 1);
    const auto p2 = JointTransmittanceDistribution::product(b1, b2);
    CHECK(joint_moment(p2, 1, 3) == Approx(moment(b1, 0.5) * moment(b2, 1.5)).epsilon(1e-14));
    CHECK(expect(p2, [](double x, double y) { return std::sqrt(x) * std::pow(y, 1.5); }) ==
          Approx(joint_moment(p2, 1, 3)).epsilon(1e-9));
}

TEST_CASE("adaptive correlation", "[pdt]") {
    const auto same = adaptive_correlate(TransmittanceDistribution::dirac(0.3), TransmittanceDistribution::dirac(0.3));
    REQUIRE(std::holds_alternative<PerfectlyCorrelatedJoint>(same.variant()));
    CHECK(std::get<DiracLaw>(std::get<PerfectlyCorrelatedJoint>(same.variant()).shared.law()).eta == 0.3);

    const auto mixed = adaptive_correlate(TransmittanceDistribution::dirac(0.2), TransmittanceDistribution::dirac(0.6));
    CHECK(joint_moment(mixed, 2, 0) == Approx(0.2));
    CHECK(joint_moment(mixed, 0, 2) == Approx(0.2));

    const auto b = TransmittanceDistribution::beta(2, 2);
    const auto ad = adaptive_correlate(b, b);
    const double quad = joint_moment(ad, 1, 1);
    // min of two independent Beta(2,2): E[min] = int S(t)^2 dt with S = 1 - 3t^2 + 2t^3
    CHECK(quad == Approx(13.0 / 35.0).epsilon(1e-12));
    const auto draws = sample(ad, 1000000, {99, 0});
    std::vector<double> f(draws.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        REQUIRE(draws[i].first == draws[i].second);
        f[i] = draws[i].first;
    }
    CHECK(oracle::within(oracle::estimate(f), quad));
    // extra loss: mean transmittance of each mode drops
    CHECK(joint_moment(ad, 2, 0) < mean(b));

    for (double j : {0.5, 1.0, 1.5, 2.0}) {
        CHECK(joint_moment(ad, j, 2.0 - j) == Approx(joint_moment(ad, 2, 0)).epsilon(1e-12));
    }
}

TEST_CASE("adaptive correlation with mixed atomic and continuous laws", "[pdt]") {
    const auto e = TransmittanceDistribution::empirical({{0.3, 1}, {0.7, 1}});
    const auto b = TransmittanceDistribution::beta(1, 1);
    const auto ad = adaptive_correlate(e, b);
    // E[min(E, U)] with U uniform: for a fixed e, E[min(e, U)] = e - e^2 / 2
    const double exact = 0.5 * ((0.3 - 0.045) + (0.7 - 0.245));
    CHECK(joint_moment(ad, 1, 1) == Approx(exact).epsilon(1e-10));
    const auto ad2 = adaptive_correlate(b, e);
    CHECK(joint_moment(ad2, 1, 1) == Approx(exact).epsilon(1e-10));
}

TEST_CASE("joint truncation and scaling act on each channel", "[pdt]") {
    const auto b = TransmittanceDistribution::beta(1, 1);
    const auto j = truncate(JointTransmittanceDistribution::product(b, scale(b, 0.5)), {0.2});
    CHECK(joint_moment(j, 2, 0) == Approx(0.6));
    CHECK(joint_moment(j, 0, 2) == Approx(0.35));
    const auto s = scale(JointTransmittanceDistribution::perfectly_correlated(b), 0.5);
    CHECK(joint_moment(s, 1, 1) == Approx(0.25));
    CHECK_THROWS_AS(truncate(JointTransmittanceDistribution::perfectly_correlated(TransmittanceDistribution::dirac(0.1)),
                             {0.5}),
                    EmptySelectionError);
}

TEST_CASE("joint sampling follows the correlation structure", "[pdt]") {
    const auto b = TransmittanceDistribution::beta(2, 5);
    const auto corr = sample(JointTransmittanceDistribution::perfectly_correlated(b), 1000, {3, 0});
    for (const auto& [x, y] : corr) CHECK(x == y);
    const auto prod = sample(JointTransmittanceDistribution::product(b, b), 200000, {3, 0});
    std::vector<double> f(prod.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = prod[i].first * prod[i].second;
    CHECK(oracle::within(oracle::estimate(f), mean(b) * mean(b)));
}

TEST_CASE("survival function", "[pdt]") {
    const auto u = TransmittanceDistribution::beta(1, 1);
    CHECK(survival(u, 0.25) == Approx(0.75));
    CHECK(survival(u, -1) == 1.0);
    CHECK(survival(u, 2) == 0.0);
    const auto d = TransmittanceDistribution::dirac(0.4);
    CHECK(survival(d, 0.4) == 1.0);
    CHECK(survival(d, 0.41) == 0.0);
}

TEST_CASE("Beta laws with singular densities integrate to full accuracy", "[pdt]") {
    for (auto [p, q] : {std::pair{0.3, 0.7}, {0.5, 0.5}, {0.8, 0.2}, {0.55, 3.0}}) {
        const auto b = TransmittanceDistribution::beta(p, q);
        for (double k : {0.5, 1.0, 2.0}) {
            INFO("p=" << p << " q=" << q << " k=" << k);
            const double exact = boost::math::beta(p + k, q) / boost::math::beta(p, q);
            const double quad = expect(b, [k](double x) { return std::pow(x, k); }, {1e-12, 1e-15, 40});
            CHECK(quad == Approx(exact).epsilon(1e-11));
            const double split = expect_window(b, [k](double x) { return std::pow(x, k); }, 0.0, 0.37) +
                                 expect_window(b, [k](double x) { return std::pow(x, k); }, 0.37, 2.0);
            CHECK(split == Approx(exact).epsilon(1e-9));
        }
        CHECK(expect(b, [](double) { return 1.0; }) == Approx(1.0).epsilon(1e-10));
    }
}
