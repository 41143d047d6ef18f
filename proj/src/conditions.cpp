#include "kograd/conditions.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "kograd/derived.hpp"
#include "kograd/errors.hpp"
#include "kograd/monotone.hpp"
#include "kograd/primitive.hpp"

namespace kograd {

const char* to_string(GrowthConditionKind k) {
    switch (k) {
        case GrowthConditionKind::RatioLiminf: return "ratio_liminf";
        case GrowthConditionKind::RatioLimsup: return "ratio_limsup";
        default: return "growth_cap";
    }
}

const char* to_string(HoldsVerdict v) {
    switch (v) {
        case HoldsVerdict::Holds: return "Holds";
        case HoldsVerdict::Fails: return "Fails";
        default: return "Inconclusive";
    }
}

namespace {

bool has_signature(const GrowthExpr& e) { return e.is_analytic() && !e.is_zero(); }

// Tail signature of the primitive: if f ~ C s^a log^b then F ~ C/(a+1) s^(a+1) log^b.
TailSignature primitive_signature(const GrowthExpr& f) {
    auto [a, b] = f.asymptotic_signature();
    return {a + 1.0, b};
}

ConvergenceVerdict classify(const IntegrandSpec& spec, const ConditionOptions& opt) {
    return classify_improper(spec, 1.0, opt.improper);
}

}  // namespace

namespace {

ConvergenceVerdict vacuous_divergence() {
    ConvergenceVerdict out;
    out.verdict = Verdict::Diverges;
    out.method = Method::Symbolic;
    return out;
}

}  // namespace

ConvergenceVerdict ko_f(const GrowthExpr& f, double p, const ConditionOptions& opt) {
    if (!(p > 1.0)) throw PreconditionError("ko_f: needs p > 1");
    if (f.is_zero()) return vacuous_divergence();  // F = 0: the integrand is unbounded
    IntegrandSpec spec;
    auto F = std::make_shared<PrimitiveCache>(f);
    spec.eval = [F, p](double s) { return std::pow((*F)(s), -1.0 / p); };
    if (has_signature(f)) {
        auto Fsig = primitive_signature(f);
        spec.signature = TailSignature{-Fsig.alpha / p, -Fsig.beta / p};
    }
    return classify(spec, opt);
}

namespace {

ConvergenceVerdict power_over_g(const GrowthExpr& g, double p, double power,
                                const ConditionOptions& opt) {
    if (!(p > 1.0)) throw PreconditionError("conditions: need p > 1");
    if (g.is_zero()) return vacuous_divergence();  // no gradient damping
    IntegrandSpec spec;
    spec.eval = [g, power](double s) { return std::pow(s, power) / g.eval(s); };
    if (has_signature(g)) {
        auto [a, b] = g.asymptotic_signature();
        spec.signature = TailSignature{power - a, -b};
    }
    return classify(spec, opt);
}

}  // namespace

ConvergenceVerdict ko_g(const GrowthExpr& g, double p, const ConditionOptions& opt) {
    return power_over_g(g, p, p - 2.0, opt);
}

ConvergenceVerdict v_bounded_at_blowup(const GrowthExpr& g, double p,
                                       const ConditionOptions& opt) {
    return power_over_g(g, p, p - 1.0, opt);
}

ConvergenceVerdict sobolev_exclusion(const GrowthExpr& g, double p,
                                     const ConditionOptions& opt) {
    return power_over_g(g, p, 2.0 * (p - 1.0), opt);
}

ConvergenceVerdict gamma_condition(const GrowthExpr& f, const GrowthExpr& g, double p, int n,
                                   const ConditionOptions& opt) {
    if (!(p > 1.0) || n < 1) throw PreconditionError("gamma_condition: needs p > 1, n >= 1");
    if (f.is_zero()) return vacuous_divergence();  // Gamma_inv(F) = 0 everywhere
    auto derived = std::make_shared<DerivedFunctions>(f, g, p, n);
    IntegrandSpec spec;
    spec.eval = [derived](double s) {
        try {
            return 1.0 / derived->Gamma_inv(derived->F(s));
        } catch (const RangeError&) {
            // Gamma_inv beyond the bracket cap: the integrand is below 1e-30,
            // negligible for the tail trend.
            return 0.0;
        }
    };
    if (has_signature(f) && has_signature(g)) {
        auto Fsig = primitive_signature(f);
        auto Gsig = primitive_signature(g);  // integral of g to 2s: same (power, logexp)
        TailSignature gamma_sig = (std::pair{Gsig.alpha, Gsig.beta} > std::pair{p, 0.0})
                                      ? Gsig
                                      : TailSignature{p, 0.0};
        spec.signature = TailSignature{-Fsig.alpha / gamma_sig.alpha,
                                       -(Fsig.beta - gamma_sig.beta) / gamma_sig.alpha};
    }
    return classify(spec, opt);
}

std::pair<ConvergenceVerdict, ConvergenceVerdict> pminus_existence(
    const GrowthExpr& f, const GrowthExpr& g, double p, const ConditionOptions& opt) {
    ConvergenceVerdict first = ko_f(f, p, opt);
    if (f.is_zero() || g.is_zero()) return {first, vacuous_divergence()};

    IntegrandSpec spec;
    // The spec is consumed within this call, so referencing f and g is safe.
    spec.eval = [&f, &g](double s) {
        try {
            double ginv = invert_monotone([&g](double t) { return g.eval(t); }, f.eval(s));
            return 1.0 / ginv;
        } catch (const RangeError&) {
            return 0.0;
        }
    };
    if (has_signature(f) && has_signature(g)) {
        auto [af, bf] = f.asymptotic_signature();
        auto [ag, bg] = g.asymptotic_signature();
        if (af > 0.0 && ag > 0.0)
            spec.signature = TailSignature{-af / ag, -(bf - bg) / ag};
    }
    ConvergenceVerdict second = classify(spec, opt);
    return {first, second};
}

GrowthConditionReport growth_ratio(const GrowthExpr& f, const GrowthExpr& g, double p,
                                   GrowthConditionKind kind, const ConditionOptions& opt) {
    if (!(p > 1.0)) throw PreconditionError("growth_ratio: needs p > 1");
    if (kind == GrowthConditionKind::GrowthCap)
        throw PreconditionError("growth_ratio: kind must be a ratio condition");
    if (opt.A_grid.empty() || opt.s_count < 8 || !(opt.s_hi >= 1e8))
        throw PreconditionError("growth_ratio: grids too small (need s_hi >= 1e8)");

    GrowthConditionReport rep;
    rep.kind = kind;
    rep.method = Method::NumericTrend;
    rep.threshold = 1.0 / p;
    rep.eps0 = opt.eps0;
    rep.A_values = opt.A_grid;

    PrimitiveCache F(f);
    for (int i = 0; i < opt.s_count; ++i) {
        double s = opt.s_lo * std::pow(opt.s_hi / opt.s_lo, double(i) / (opt.s_count - 1));
        rep.s_grid.push_back(s);
    }
    const double tail_from = opt.s_hi / 10.0;

    bool all_hold = true;
    bool any_decisive_fail = false;
    const bool liminf = kind == GrowthConditionKind::RatioLiminf;
    for (double A : opt.A_grid) {
        std::vector<double> samples;
        double tail_min = INFINITY, tail_max = -INFINITY;
        int tail_count = 0;
        for (double s : rep.s_grid) {
            double ratio = g.eval(A * std::pow(F(s), 1.0 / p)) / (std::pow(A, p) * f.eval(s));
            samples.push_back(ratio);
            // +inf means the ratio overflowed upward, which is still usable
            // evidence; NaN samples are dropped.
            if (s >= tail_from && !std::isnan(ratio)) {
                tail_min = std::min(tail_min, ratio);
                tail_max = std::max(tail_max, ratio);
                ++tail_count;
            }
        }
        double est = tail_count > 0 ? (liminf ? tail_min : tail_max)
                                    : std::numeric_limits<double>::quiet_NaN();
        rep.estimated_limits.push_back(est);
        rep.ratio_samples.push_back(std::move(samples));
        if (liminf) {
            if (!(est > rep.threshold + opt.eps0)) all_hold = false;
        } else {
            if (!(est < rep.threshold - opt.eps0)) all_hold = false;
        }
    }
    // A decisive failure is read off the largest tested A: the ratio is
    // monotone-ish in A for the analytic family, so no larger A0 rescues it.
    double last = rep.estimated_limits.back();
    if (liminf)
        any_decisive_fail = last < rep.threshold - opt.eps0;
    else
        any_decisive_fail = last > rep.threshold + opt.eps0;

    rep.verdict = all_hold              ? HoldsVerdict::Holds
                  : any_decisive_fail   ? HoldsVerdict::Fails
                                        : HoldsVerdict::Inconclusive;
    return rep;
}

GrowthConditionReport growth_ratio(const GrowthExpr& f, const GrowthExpr& g, double p,
                                   const ConditionOptions& opt) {
    return growth_ratio(f, g, p,
                        p < 2.0 ? GrowthConditionKind::RatioLiminf
                                : GrowthConditionKind::RatioLimsup,
                        opt);
}

GrowthConditionReport growth_cap(const GrowthExpr& g, double p, const ConditionOptions& opt) {
    if (!(p > 1.0)) throw PreconditionError("growth_cap: needs p > 1");
    GrowthConditionReport rep;
    rep.kind = GrowthConditionKind::GrowthCap;
    rep.threshold = 0.0;
    rep.eps0 = opt.eps0;

    if (g.is_zero()) {
        rep.method = Method::Symbolic;
        rep.verdict = HoldsVerdict::Holds;
        rep.estimated_limits.push_back(0.0);
        return rep;
    }
    if (has_signature(g)) {
        rep.method = Method::Symbolic;
        auto [a, b] = g.asymptotic_signature();
        const double eps = 1e-12;
        bool holds = a < p - 1.0 - eps || (std::fabs(a - (p - 1.0)) <= eps && b <= eps);
        rep.verdict = holds ? HoldsVerdict::Holds : HoldsVerdict::Fails;
        rep.estimated_limits.push_back(holds ? g.leading_coeff() : INFINITY);
        return rep;
    }

    // Numeric tail estimate of the log-log slope of g(s)/s^(p-1).
    rep.method = Method::NumericTrend;
    const int npts = 17;
    std::vector<double> ratios;
    for (int i = 0; i < npts; ++i) {
        double s = std::pow(10.0, 4.0 + 4.0 * i / (npts - 1));
        double ratio = g.eval(s) / std::pow(s, p - 1.0);
        rep.s_grid.push_back(s);
        ratios.push_back(ratio);
    }
    rep.ratio_samples.push_back(ratios);
    // Slope over the last decade decides boundedness.
    double slope = std::log(ratios[npts - 1] / ratios[npts - 5]) /
                   std::log(rep.s_grid[npts - 1] / rep.s_grid[npts - 5]);
    rep.estimated_limits.push_back(ratios.back());
    if (slope <= 0.002)
        rep.verdict = HoldsVerdict::Holds;
    else if (slope >= 0.01)
        rep.verdict = HoldsVerdict::Fails;
    else
        rep.verdict = HoldsVerdict::Inconclusive;
    return rep;
}

}  // namespace kograd
