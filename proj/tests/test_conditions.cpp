#include <doctest.h>

#include <cmath>
#include <random>

#include "kograd/conditions.hpp"
#include "oracles.hpp"

using namespace kograd;

namespace {
GrowthExpr tpow(double a, double c = 1.0) { return GrowthExpr::power(c, a); }
GrowthExpr tpowlog(double a, double b, double c = 1.0) {
    return GrowthExpr::power_log(c, a, b);
}
}  // namespace

TEST_CASE("ko_f verdicts") {
    CHECK(ko_f(tpow(2.0), 3.0).diverges());   // q = p-1
    CHECK(ko_f(tpow(3.0), 2.0).converges());  // F^(1/2) ~ s^2
    CHECK(ko_f(tpowlog(1.0, 2.0), 2.0).diverges());  // boundary q = p in the log family
    CHECK(ko_f(tpowlog(1.0, 2.5), 2.0).converges());
    CHECK(ko_f(tpow(1.0), 2.0).method == Method::Symbolic);
}

TEST_CASE("ko_g verdicts") {
    CHECK(ko_g(tpow(1.5), 2.5).diverges());  // q = p-1
    CHECK(ko_g(tpow(2.0), 2.0).converges());
    CHECK(ko_g(tpowlog(2.0, 1.0), 3.0).diverges());  // log boundary q = 1
    CHECK(ko_g(tpowlog(2.0, 1.5), 3.0).converges());
}

TEST_CASE("v_bounded_at_blowup verdicts") {
    CHECK(v_bounded_at_blowup(tpow(3.0), 2.0).converges());  // q = p+1: v stays bounded
    CHECK(v_bounded_at_blowup(tpow(2.0), 3.0).diverges());   // q = p-1
    CHECK(v_bounded_at_blowup(tpowlog(2.0, 2.0), 2.0).converges());  // s^-1 log^-2
}

TEST_CASE("sobolev_exclusion verdicts") {
    CHECK(sobolev_exclusion(tpow(2.0), 2.0).diverges());   // q = 2(p-1)
    CHECK(sobolev_exclusion(tpow(4.0), 2.0).converges());  // q = 2p
    CHECK(sobolev_exclusion(tpowlog(5.0, -1.0), 3.0).diverges());  // t^(2p-1)/log
}

TEST_CASE("gamma_condition verdicts") {
    CHECK(gamma_condition(tpow(5.0), tpow(2.0), 2.0, 3).converges());
    CHECK(gamma_condition(tpow(1.0), tpow(1.0), 2.0, 3).diverges());
    // f = (p-1) t^(p-1), g = t^p: the explicit exponential solution's family.
    for (double p : {1.5, 2.0, 3.0})
        CHECK(gamma_condition(tpow(p - 1.0, p - 1.0), tpow(p), p, 3).diverges());
}

TEST_CASE("gamma_condition numeric path agrees with symbolic") {
    ConditionOptions numeric;
    numeric.improper.force_numeric = true;
    CHECK(gamma_condition(tpow(5.0), tpow(2.0), 2.0, 3, numeric).converges());
    CHECK(gamma_condition(tpow(1.0), tpow(1.0), 2.0, 3, numeric).diverges());
    CHECK(gamma_condition(tpow(1.0), tpow(1.0), 2.0, 3, numeric).method ==
          Method::NumericTrend);
}

TEST_CASE("pminus_existence verdicts") {
    auto [a1, b1] = pminus_existence(tpow(2.0), tpow(3.0), 2.0);
    CHECK(a1.converges());
    CHECK(b1.diverges());  // 1/g_inv(f(s)) = s^(-2/3)

    auto [a2, b2] = pminus_existence(tpow(1.0), tpow(1.0), 2.0);
    CHECK(a2.diverges());
    (void)b2;

    auto [a3, b3] = pminus_existence(tpow(5.0), tpow(2.0), 2.0);
    CHECK(a3.converges());
    CHECK(b3.converges());
}

TEST_CASE("growth_ratio verdicts") {
    auto r1 = growth_ratio(tpow(1.0), tpow(3.0), 2.0, GrowthConditionKind::RatioLiminf);
    CHECK(r1.verdict == HoldsVerdict::Holds);

    auto r2 = growth_ratio(tpow(3.0), tpow(1.0), 2.0, GrowthConditionKind::RatioLimsup);
    CHECK(r2.verdict == HoldsVerdict::Holds);

    // f = g = t at p = 2: the ratio tends to 1/(A sqrt(2)), comparable to 1/p.
    auto r3 = growth_ratio(tpow(1.0), tpow(1.0), 2.0, GrowthConditionKind::RatioLiminf);
    CHECK(r3.verdict != HoldsVerdict::Holds);
    CHECK(r3.estimated_limits.front() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("growth_cap verdicts") {
    CHECK(growth_cap(tpow(2.0), 3.0).holds());
    CHECK(growth_cap(tpow(2.0), 2.0).verdict == HoldsVerdict::Fails);
    CHECK(growth_cap(tpowlog(1.0, 1.0), 2.0).verdict == HoldsVerdict::Fails);

    // Opaque route goes through the numeric tail slope.
    auto opaque_ok = GrowthExpr::opaque([](double t) { return 2.0 * t; });
    CHECK(growth_cap(opaque_ok, 2.0).holds());
    auto opaque_bad = GrowthExpr::opaque([](double t) { return t * t; });
    CHECK(growth_cap(opaque_bad, 2.0).verdict == HoldsVerdict::Fails);
}

TEST_CASE("composite symbolic signatures agree with the numeric trend") {
    // The Gamma-transform and g_inv(f) compositions carry the most involved
    // exponent arithmetic; their symbolic verdicts must match what the
    // sampled tails say whenever the fit is decisively off the boundary.
    std::mt19937 rng(909090);
    std::uniform_real_distribution<double> up(1.3, 3.2), ua(0.4, 3.5), ub(0.0, 2.0),
        ucoef(0.3, 3.0);
    ConditionOptions numeric;
    numeric.improper.force_numeric = true;
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
        double p = up(rng);
        int n = 2 + static_cast<int>(rng() % 3);
        auto f = GrowthExpr::analytic({{ucoef(rng), ua(rng), (rng() % 2) ? ub(rng) : 0.0}});
        auto g = GrowthExpr::analytic({{ucoef(rng), ua(rng), (rng() % 2) ? ub(rng) : 0.0}});

        auto sym_gamma = gamma_condition(f, g, p, n);
        auto num_gamma = gamma_condition(f, g, p, n, numeric);
        REQUIRE(sym_gamma.method == Method::Symbolic);
        if (!num_gamma.inconclusive() &&
            std::fabs(sym_gamma.signature->alpha + 1.0) > 0.05) {
            ++compared;
            CHECK(sym_gamma.verdict == num_gamma.verdict);
        }

        auto [sf, sg] = pminus_existence(f, g, p);
        auto [nf, ng] = pminus_existence(f, g, p, numeric);
        if (sg.method == Method::Symbolic && !ng.inconclusive() &&
            std::fabs(sg.signature->alpha + 1.0) > 0.05) {
            ++compared;
            CHECK(sg.verdict == ng.verdict);
        }
        (void)sf;
        (void)nf;
    }
    CHECK(compared > 60);
}

TEST_CASE("opaque nonlinearities route through the numeric trend") {
    auto f = GrowthExpr::opaque([](double t) { return t; });
    auto verdict = ko_f(f, 2.0);
    CHECK(verdict.method == Method::NumericTrend);
    CHECK(verdict.diverges());
    auto g = GrowthExpr::opaque([](double t) { return t * t * t; });
    CHECK(ko_g(g, 2.0).converges());
    CHECK(v_bounded_at_blowup(g, 2.0).converges());
}

TEST_CASE("minus-sign conditions are mutually exclusive") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> up(1.3, 3.2), uexp(0.3, 4.0);
    int seen_converging = 0;
    for (int i = 0; i < 200 && seen_converging < 40; ++i) {
        double p = up(rng);
        auto f = tpow(uexp(rng));
        auto g = tpow(uexp(rng));
        auto gamma = gamma_condition(f, g, p, 3);
        if (!gamma.converges()) continue;
        ++seen_converging;
        auto [pm1, pm2] = pminus_existence(f, g, p);
        CHECK(!pm1.diverges());
        CHECK(!pm2.diverges());
    }
    CHECK(seen_converging > 10);
}

TEST_CASE("ko_g and v_bounded are not exhaustive for q > p") {
    for (double p : {1.5, 2.0, 3.0}) {
        auto g = tpow(p + 0.7);
        CHECK(ko_g(g, p).converges());
        CHECK(v_bounded_at_blowup(g, p).converges());
    }
}

TEST_CASE("growth cap implies the gradient blow-up integral diverges") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> up(1.3, 3.2), ua(0.2, 4.0), ucoef(0.2, 3.0);
    int holds_count = 0;
    for (int i = 0; i < 200 && holds_count < 40; ++i) {
        double p = up(rng);
        auto g = GrowthExpr::analytic({{ucoef(rng), ua(rng), 0.0}});
        auto cap = growth_cap(g, p);
        if (!cap.holds()) continue;
        ++holds_count;
        CHECK(ko_g(g, p).diverges());
    }
    CHECK(holds_count > 10);
}
