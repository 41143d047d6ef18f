#include "kograd/classify.hpp"

#include <cmath>

#include "kograd/errors.hpp"

namespace kograd {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Existence: return "Existence";
        case Outcome::Nonexistence: return "Nonexistence";
        default: return "Inconclusive";
    }
}

namespace {

void add_common_caveats(Classification& cls, const ProblemSpec& spec) {
    if (spec.g.is_analytic() && !spec.g.is_zero() && !spec.g.lipschitz_at_zero())
        cls.caveats.push_back(
            "g is not locally Lipschitz at 0 (a term ~ t^a with a < 1); "
            "the classification is reported anyway");
}

Classification classify_plus(const ProblemSpec& spec, const ClassifyOptions& opt) {
    Classification cls;
    const auto& co = opt.conditions;
    auto kof = ko_f(spec.f, spec.p, co);
    auto kog = ko_g(spec.g, spec.p, co);
    cls.integral_reports.push_back({"ko_f", kof});
    cls.integral_reports.push_back({"ko_g", kog});

    if (kof.converges() || kog.converges()) {
        cls.outcome = Outcome::Nonexistence;
        cls.clause = kof.converges() ? "plus.nonexistence.ko_f" : "plus.nonexistence.ko_g";
        cls.caveats.push_back("nonexistence applies to W^{1,inf}_loc subsolutions");
        auto sob = sobolev_exclusion(spec.g, spec.p, co);
        cls.integral_reports.push_back({"sobolev_energy", sob});
        if (sob.diverges())
            cls.caveats.push_back(
                "the energy integral diverges: the statement extends toward "
                "W^{1,p}_loc subsolutions given a comparison principle there");
        return cls;
    }
    if (kof.inconclusive() || kog.inconclusive()) {
        cls.outcome = Outcome::Inconclusive;
        cls.clause = "plus.gap";
        cls.caveats.push_back("a blow-up integral test was inconclusive");
        return cls;
    }

    // Both diverge: existence needs the growth cap or a ratio condition.
    auto cap = growth_cap(spec.g, spec.p, co);
    cls.growth_reports.push_back(cap);
    if (cap.holds()) {
        cls.outcome = Outcome::Existence;
        cls.clause = "plus.existence.growth_cap";
        return cls;
    }

    bool any_inconclusive = cap.verdict == HoldsVerdict::Inconclusive;
    if (spec.p <= 2.0) {
        auto r17 = growth_ratio(spec.f, spec.g, spec.p, GrowthConditionKind::RatioLiminf, co);
        cls.growth_reports.push_back(r17);
        if (r17.holds()) {
            cls.outcome = Outcome::Existence;
            cls.clause = "plus.existence.ratio_liminf";
            if (spec.p == 2.0)
                cls.caveats.push_back("at p = 2 both ratio conditions are admissible");
            return cls;
        }
        any_inconclusive |= r17.verdict == HoldsVerdict::Inconclusive;
    }
    if (spec.p >= 2.0) {
        auto r18 = growth_ratio(spec.f, spec.g, spec.p, GrowthConditionKind::RatioLimsup, co);
        cls.growth_reports.push_back(r18);
        if (r18.holds()) {
            cls.outcome = Outcome::Existence;
            cls.clause = "plus.existence.ratio_limsup";
            if (spec.p == 2.0)
                cls.caveats.push_back("at p = 2 both ratio conditions are admissible");
            return cls;
        }
        any_inconclusive |= r18.verdict == HoldsVerdict::Inconclusive;
    }

    cls.outcome = Outcome::Inconclusive;
    cls.clause = "plus.gap";
    cls.caveats.push_back(
        any_inconclusive
            ? "a growth condition was inconclusive"
            : "both blow-up integrals diverge but no existence-side condition holds; "
              "the theory is silent here");
    return cls;
}

Classification classify_minus(const ProblemSpec& spec, const ClassifyOptions& opt) {
    Classification cls;
    const auto& co = opt.conditions;
    auto gamma = gamma_condition(spec.f, spec.g, spec.p, spec.n, co);
    cls.integral_reports.push_back({"gamma_inv_integral", gamma});
    if (gamma.converges()) {
        cls.outcome = Outcome::Nonexistence;
        cls.clause = "minus.nonexistence.gamma";
        return cls;
    }

    auto [pm_f, pm_g] = pminus_existence(spec.f, spec.g, spec.p, co);
    cls.integral_reports.push_back({"ko_f", pm_f});
    cls.integral_reports.push_back({"grad_inverse_integral", pm_g});
    if (pm_f.diverges()) {
        cls.outcome = Outcome::Existence;
        cls.clause = "minus.existence.ko_f";
        return cls;
    }
    if (pm_g.diverges()) {
        cls.outcome = Outcome::Existence;
        cls.clause = "minus.existence.grad_inverse";
        return cls;
    }

    cls.outcome = Outcome::Inconclusive;
    cls.clause = "minus.gap";
    cls.caveats.push_back(
        (gamma.inconclusive() || pm_f.inconclusive() || pm_g.inconclusive())
            ? "a condition was inconclusive"
            : "neither the nonexistence nor the existence conditions fired");
    return cls;
}

}  // namespace

Classification classify(const ProblemSpec& spec, const ClassifyOptions& opt) {
    spec.validate();
    Classification cls = spec.sign == Sign::Plus ? classify_plus(spec, opt)
                                                 : classify_minus(spec, opt);
    add_common_caveats(cls, spec);
    return cls;
}

Classification power_case(double m, double q, double p, Sign sign) {
    if (!(m > 0.0) || !(q > 0.0) || !(p > 1.0))
        throw PreconditionError("power_case: needs m, q > 0 and p > 1");
    const double eps = 1e-12;
    const double crit = p - 1.0;
    Classification cls;

    if (sign == Sign::Plus) {
        if (q > crit + eps) {
            cls.outcome = Outcome::Nonexistence;
            cls.clause = "power.plus.gradient_supercritical";
            cls.caveats.push_back("nonexistence applies to W^{1,inf}_loc subsolutions");
        } else if (m > crit + eps) {
            cls.outcome = Outcome::Nonexistence;
            cls.clause = "power.plus.forcing_supercritical";
            cls.caveats.push_back("nonexistence applies to W^{1,inf}_loc subsolutions");
        } else {
            cls.outcome = Outcome::Existence;
            cls.clause = "power.plus.subcritical";  // growth cap holds for q <= p-1
        }
        return cls;
    }

    if (q <= crit + eps) {
        // Subcritical gradient: existence is equivalent to the forcing test.
        if (m <= crit + eps) {
            cls.outcome = Outcome::Existence;
            cls.clause = "power.minus.forcing_subcritical";
        } else {
            cls.outcome = Outcome::Nonexistence;
            cls.clause = "power.minus.forcing_supercritical";
        }
        return cls;
    }
    // Supercritical gradient: the integral tests compare m against q.
    if (m < q - eps) {
        cls.outcome = Outcome::Existence;
        cls.clause = "power.minus.gradient_dominates";
    } else if (std::fabs(m - q) <= eps) {
        cls.outcome = Outcome::Existence;
        cls.clause = "power.minus.gradient_dominates";
        cls.caveats.push_back(
            "boundary m = q: decided Existence because the integral of s^(-m/q) "
            "diverges at exponent -1");
    } else {
        cls.outcome = Outcome::Nonexistence;
        cls.clause = "power.minus.forcing_dominates";
    }
    return cls;
}

ConsistencyReport cross_validate(const ProblemSpec& spec, const Classification& cls,
                                 const std::vector<double>& v0_set, double r_max,
                                 const MarchControls& controls) {
    if (cls.outcome == Outcome::Inconclusive)
        throw PreconditionError("cross_validate: classification is Inconclusive");

    ConsistencyReport rep;
    if (cls.outcome == Outcome::Nonexistence && spec.sign == Sign::Minus) {
        rep.checked = false;
        rep.note = "minus-sign nonexistence has no radial blow-up criterion; not checked";
        return rep;
    }
    rep.checked = true;
    for (double v0 : v0_set) {
        ProblemSpec run = spec;
        run.v0 = v0;
        RadialTrajectory traj = march(run, r_max, controls);
        CrossValidationRow row;
        row.v0 = v0;
        row.termination = traj.termination.kind;
        row.R_est = traj.termination.R_est;
        if (cls.outcome == Outcome::Nonexistence)
            row.consistent = traj.termination.kind == TerminationKind::BlowUp &&
                             std::isfinite(traj.termination.R_est);
        else
            row.consistent = traj.termination.kind == TerminationKind::ReachedRmax;
        rep.all_consistent = rep.all_consistent && row.consistent;
        rep.rows.push_back(row);
    }
    rep.note = rep.all_consistent ? "ODE runs agree with the classification"
                                  : "mismatch between classification and ODE runs";
    return rep;
}

}  // namespace kograd
