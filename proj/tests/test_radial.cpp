#include <doctest.h>

#include <cmath>
#include <random>

#include "kograd/conditions.hpp"
#include "kograd/errors.hpp"
#include "kograd/march.hpp"
#include "kograd/picard.hpp"
#include "kograd/residual.hpp"
#include "oracles.hpp"

using namespace kograd;

namespace {

ProblemSpec linear_test_spec() {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 1.0);
    spec.g = GrowthExpr::zero();
    spec.v0 = 1.0;
    spec.test_mode = true;
    return spec;
}

double sinhc(double r) { return r == 0.0 ? 1.0 : std::sinh(r) / r; }

ProblemSpec random_spec(std::mt19937& rng) {
    std::uniform_real_distribution<double> up(1.3, 3.2), uv(0.5, 2.0), ucoef(0.5, 2.0);
    ProblemSpec spec;
    spec.p = up(rng);
    spec.n = 2 + static_cast<int>(rng() % 3);
    spec.sign = (rng() % 2) ? Sign::Plus : Sign::Minus;
    std::uniform_real_distribution<double> ua(0.3, spec.p + 1.0);
    auto mk = [&]() {
        std::vector<GrowthTerm> terms{{ucoef(rng), ua(rng), 0.0}};
        if (rng() % 3 == 0) terms.push_back({ucoef(rng), ua(rng), 1.0});
        return GrowthExpr::analytic(terms);
    };
    spec.f = mk();
    spec.g = mk();
    spec.v0 = uv(rng);
    return spec;
}

}  // namespace

TEST_CASE("picard reproduces the linear closed form") {
    auto spec = linear_test_spec();
    PicardOptions opt;
    auto traj = picard_solve(spec, 0.3, opt);
    for (const auto& node : traj.nodes)
        CHECK(static_cast<double>(node.v) == doctest::Approx(sinhc(node.r)).epsilon(1e-8));
}

TEST_CASE("one application of the operator fixes the initial value") {
    auto spec = linear_test_spec();
    PicardGrid grid;
    CHECK_THROWS_AS(grid = picard_iterate(spec, 0.2, 64, 1, 1e-30), NoConvergenceError);
    // The iterate after a single application still starts at v0 with slope 0.
    try {
        picard_iterate(spec, 0.2, 64, 1, 1e-30);
    } catch (const NoConvergenceError&) {
    }
    grid = picard_iterate(spec, 0.2, 64, 2, 1e30);  // accept after two sweeps
    CHECK(static_cast<double>(grid.v[0]) == doctest::Approx(spec.v0));
    CHECK(static_cast<double>(grid.dv[0]) == 0.0);
}

TEST_CASE("picard refuses radii beyond the containment bound") {
    auto spec = linear_test_spec();
    double ra = picard_r_alpha(spec);
    CHECK(ra > 0.0);
    CHECK_THROWS_AS(picard_solve(spec, ra * 1.5), PreconditionError);
}

TEST_CASE("the fixed point stays inside the containment ball") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> up(1.4, 3.0), uv(0.5, 2.0), ucoef(0.5, 2.0);
    for (int i = 0; i < 8; ++i) {
        ProblemSpec spec;
        spec.p = up(rng);
        spec.n = 2 + static_cast<int>(rng() % 3);
        spec.sign = Sign::Plus;
        std::uniform_real_distribution<double> ua(0.4, spec.p);
        spec.f = GrowthExpr::analytic({{ucoef(rng), ua(rng), 0.0}});
        spec.g = GrowthExpr::analytic({{ucoef(rng), ua(rng), 0.0}});
        spec.v0 = uv(rng);
        const double m2 = spec.v0 / 2.0, m3 = 1.0;
        double ra = picard_r_alpha(spec, m2, m3);
        auto traj = picard_solve(spec, ra);
        for (const auto& node : traj.nodes) {
            CHECK(std::fabs(static_cast<double>(node.v) - spec.v0) <= m2 * (1.0 + 1e-9));
            CHECK(static_cast<double>(node.dv) <= m3 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("march reproduces the linear closed form") {
    auto spec = linear_test_spec();
    MarchControls c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-12;
    auto traj = march(spec, 5.5, c);
    REQUIRE(traj.termination.kind == TerminationKind::ReachedRmax);
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
        auto vs = eval_trajectory(traj, r);
        CHECK(static_cast<double>(vs.v) == doctest::Approx(sinhc(r)).epsilon(1e-6));
    }
}

TEST_CASE("one-dimensional case reproduces cosh") {
    // n = 1 removes the curvature term: v'' = v, v(0)=1, v'(0)=0 => cosh(r).
    ProblemSpec spec = linear_test_spec();
    spec.n = 1;
    MarchControls c;
    c.rel_tol = 1e-10;
    auto traj = march(spec, 3.0, c);
    for (double r : {0.5, 1.5, 2.5}) {
        auto vs = eval_trajectory(traj, r);
        CHECK(static_cast<double>(vs.v) == doctest::Approx(std::cosh(r)).epsilon(1e-7));
        CHECK(static_cast<double>(vs.dv) == doctest::Approx(std::sinh(r)).epsilon(1e-6));
    }
    auto pic = picard_solve(spec, 0.3);
    for (const auto& node : pic.nodes)
        CHECK(static_cast<double>(node.v) == doctest::Approx(std::cosh(node.r)).epsilon(1e-9));
}

TEST_CASE("picard agrees with march on a degenerate-p instance") {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.n = 2;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 2.0);
    spec.g = GrowthExpr::power(1.0, 1.0);
    spec.v0 = 1.0;

    auto pic = picard_solve(spec, 0.1);
    MarchControls c;
    c.rel_tol = 1e-11;
    c.abs_tol = 1e-13;
    c.max_ratio = 1.02;
    auto mar = march(spec, 0.1, c);
    double worst = 0.0;
    for (const auto& node : pic.nodes) {
        if (node.r < mar.r_first()) continue;
        auto vs = eval_trajectory(mar, node.r);
        worst = std::max(worst, std::fabs(static_cast<double>(vs.v - node.v)));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("march detects unbounded blow-up and the radius is stable") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 3.0);
    spec.g = GrowthExpr::power(1.0, 2.0);
    spec.v0 = 1.0;

    MarchControls c;
    c.rel_tol = 1e-8;
    auto traj = march(spec, 20.0, c);
    REQUIRE(traj.termination.kind == TerminationKind::BlowUp);
    CHECK(std::isfinite(traj.termination.R_est));
    CHECK(!traj.termination.v_bounded);  // s^(p-1)/g = 1/s diverges here

    MarchControls tight = c;
    tight.rel_tol = 1e-9;
    auto ref = march(spec, 20.0, tight);
    REQUIRE(ref.termination.kind == TerminationKind::BlowUp);
    double tolR = std::max(5.0 * (traj.termination.R_uncertainty +
                                  ref.termination.R_uncertainty),
                           1e-5 * ref.termination.R_est);
    CHECK(std::fabs(traj.termination.R_est - ref.termination.R_est) <= tolR);
}

TEST_CASE("march detects bounded-v blow-up") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 1.0);
    spec.g = GrowthExpr::power(1.0, 3.0);
    spec.v0 = 1.0;
    auto traj = march(spec, 20.0);
    REQUIRE(traj.termination.kind == TerminationKind::BlowUp);
    CHECK(traj.termination.v_bounded);  // s^(p-1)/s^3 converges
    CHECK(traj.warnings.empty());
}

TEST_CASE("step collapse without a pole is reported distinctly") {
    auto spec = linear_test_spec();
    MarchControls c;
    c.min_step_frac = 0.5;  // force the floor immediately; no pole signature
    auto traj = march(spec, 5.0, c);
    CHECK(traj.termination.kind == TerminationKind::StepCollapse);
    REQUIRE(!traj.warnings.empty());
    CHECK(traj.warnings.front().find("without a blow-up signature") != std::string::npos);
}

TEST_CASE("apriori properties hold on computed trajectories") {
    auto spec = linear_test_spec();
    auto traj = march(spec, 3.0);
    auto rep = apriori_check(traj, spec);
    CHECK(rep.pass());

    ProblemSpec minus;
    minus.p = 2.0;
    minus.n = 3;
    minus.sign = Sign::Minus;
    minus.f = GrowthExpr::power(1.0, 2.0);
    minus.g = GrowthExpr::power(1.0, 1.0);
    minus.v0 = 1.0;
    auto mtraj = march(minus, 3.0);
    auto mrep = apriori_check(mtraj, minus);
    CHECK(mrep.pass());
    CHECK(mrep.sign_ok);

    // Negative control: a synthetic decreasing profile must fail.
    RadialTrajectory bad = traj;
    for (auto& node : bad.nodes) node.dv = -node.dv;
    auto brep = apriori_check(bad, spec);
    CHECK(!brep.dv_positive);
    CHECK(!brep.pass());
}

TEST_CASE("residual of the closed-form degenerate solution") {
    // v = (R^2 - r^2)/8 solves the p=4, n=2 problem with f = 0, g = t^2,
    // minus sign (the two-solution example).
    ProblemSpec spec;
    spec.p = 4.0;
    spec.n = 2;
    spec.sign = Sign::Minus;
    spec.f = GrowthExpr::zero();
    spec.g = GrowthExpr::power(1.0, 2.0);
    spec.v0 = 0.125;
    spec.test_mode = true;

    const double R = 1.0;
    auto v = [R](double r) { return (R * R - r * r) / 8.0; };
    auto dv = [](double r) { return -r / 4.0; };
    auto grid = oracles::linear_grid(0.1, 0.9, 101);
    CHECK(residual_on_grid(spec, v, dv, grid, 1e-4) <= 1e-8);
}

TEST_CASE("residual of a constant profile is the forcing term") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 2.0);
    spec.g = GrowthExpr::power(1.0, 1.0);
    spec.v0 = 1.5;
    auto v = [&](double) { return spec.v0; };
    auto dv = [](double) { return 0.0; };
    std::vector<double> grid{2.0};
    double expect = 4.0 * spec.f.eval(spec.v0);  // r^(n-1) f(v0)
    CHECK(residual_on_grid(spec, v, dv, grid) == doctest::Approx(expect));
}

TEST_CASE("march output is self-consistent to the integration tolerance") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 1.0);
    spec.g = GrowthExpr::power(1.0, 1.0);
    spec.v0 = 1.0;
    MarchControls c;
    c.rel_tol = 1e-8;
    c.abs_tol = 1e-10;
    c.max_ratio = 1.02;
    auto traj = march(spec, 3.0, c);
    auto res = residual_trajectory(traj, spec);
    CHECK(res.max_scaled <= 10.0 * c.rel_tol);
}

TEST_CASE("derivative identity for the diagnostic series") {
    for (double p : {1.5, 2.0, 3.0}) {
        ProblemSpec spec;
        spec.p = p;
        spec.n = 3;
        spec.sign = Sign::Plus;
        double a = std::min(0.4, p - 1.0);
        spec.f = GrowthExpr::power(1.0, a);
        spec.g = GrowthExpr::power(1.0, a);
        spec.v0 = 1.0;
        MarchControls c;
        c.max_ratio = 1.02;
        auto traj = march(spec, 4.0, c);
        auto rep = diagnostics_identity_check(traj, spec);
        CHECK(rep.nodes_checked > 100);
        CHECK(rep.max_defect <= 1e-4);
    }
}

TEST_CASE("gradient energy grows without saturation when the energy integral diverges") {
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 3.0);
    spec.g = GrowthExpr::power(1.0, 2.0);  // s^(2(p-1))/g = 1: diverges
    spec.v0 = 1.0;
    REQUIRE(sobolev_exclusion(spec.g, spec.p).diverges());
    auto traj = march(spec, 20.0);
    REQUIRE(traj.termination.kind == TerminationKind::BlowUp);

    auto energy = gradient_energy(traj, spec.p);
    double R = traj.termination.R_est;
    // Split the approach to R into decades of (R - r); increments of the
    // running integral over successive decades must not decrease.
    std::vector<long double> decade_inc;
    double gap_hi = R - traj.nodes.front().r;
    for (int d = 0; d < 6; ++d) {
        double lo = gap_hi / std::pow(10.0, d + 1);
        double hi = gap_hi / std::pow(10.0, d);
        long double e_lo = 0, e_hi = 0;
        for (size_t i = 0; i < traj.nodes.size(); ++i) {
            double gap = R - traj.nodes[i].r;
            if (gap <= hi) {
                e_lo = energy[i];
                break;
            }
        }
        for (size_t i = 0; i < traj.nodes.size(); ++i) {
            double gap = R - traj.nodes[i].r;
            if (gap <= lo) {
                e_hi = energy[i];
                break;
            }
        }
        if (e_hi > 0 && e_lo >= 0) decade_inc.push_back(e_hi - e_lo);
    }
    REQUIRE(decade_inc.size() >= 4);
    for (size_t i = 1; i < decade_inc.size(); ++i)
        CHECK(decade_inc[i] >= decade_inc[i - 1] * 0.999L);
}

TEST_CASE("blow-up at every initial value when a blow-up integral converges") {
    // Instances (with log factors) on the nonexistence side of the plus-sign
    // problem must blow up at finite radius for every tested v0.
    struct Inst {
        double p;
        GrowthExpr f, g;
    };
    std::vector<Inst> instances;
    instances.push_back({2.0, GrowthExpr::power_log(1.0, 2.0, 1.0), GrowthExpr::power(1.0, 1.0)});
    instances.push_back({1.5, GrowthExpr::power(1.0, 1.0), GrowthExpr::power_log(1.0, 1.0, 2.0)});
    instances.push_back({3.0, GrowthExpr::power(0.5, 4.0), GrowthExpr::power(2.0, 1.0)});
    for (const auto& inst : instances) {
        REQUIRE((ko_f(inst.f, inst.p).converges() || ko_g(inst.g, inst.p).converges()));
        for (double v0 : {0.5, 1.0, 2.0}) {
            ProblemSpec spec;
            spec.p = inst.p;
            spec.n = 3;
            spec.sign = Sign::Plus;
            spec.f = inst.f;
            spec.g = inst.g;
            spec.v0 = v0;
            MarchControls c;
            c.rel_tol = 1e-9;
            auto traj = march(spec, 50.0, c);
            CHECK(traj.termination.kind == TerminationKind::BlowUp);
            CHECK(std::isfinite(traj.termination.R_est));
        }
    }
}

TEST_CASE("log-boundary v trend defers to the integral verdict") {
    // g = t^p log^2(e+t): the boundedness integral converges but the decade
    // trend decays only like 1/log, so the verdict must come from the
    // integral path, without a disagreement warning.
    ProblemSpec spec;
    spec.p = 2.0;
    spec.n = 3;
    spec.sign = Sign::Plus;
    spec.f = GrowthExpr::power(1.0, 3.0);
    spec.g = GrowthExpr::power_log(1.0, 2.0, 2.0);
    spec.v0 = 1.0;
    REQUIRE(v_bounded_at_blowup(spec.g, spec.p).converges());
    auto traj = march(spec, 20.0);
    REQUIRE(traj.termination.kind == TerminationKind::BlowUp);
    CHECK(traj.termination.v_bounded);
    CHECK(traj.warnings.empty());
}

TEST_CASE("randomized a priori suite across both signs") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 10; ++i) {
        auto spec = random_spec(rng);
        MarchControls c;
        c.rel_tol = 1e-9;
        auto traj = march(spec, 2.5, c);
        auto rep = apriori_check(traj, spec);
        INFO("instance ", i, ": p=", spec.p, " sign=", to_string(spec.sign));
        CHECK(rep.pass());

        // Container invariants: r strictly increasing from a positive start,
        // v nondecreasing per step (the early increments round to zero at
        // machine resolution) and strictly increasing overall, positive slope
        // at interior nodes, and the spacing ratio respected.
        CHECK(traj.r_first() > 0.0);
        CHECK(traj.nodes.back().v > traj.nodes.front().v);
        for (size_t k = 1; k < traj.nodes.size(); ++k) {
            CHECK(traj.nodes[k].r > traj.nodes[k - 1].r);
            CHECK(traj.nodes[k].v >= traj.nodes[k - 1].v);
            CHECK(traj.nodes[k].dv > 0.0L);
            CHECK(traj.nodes[k].r <= traj.nodes[k - 1].r * (c.max_ratio + 1e-12));
        }
    }
}
