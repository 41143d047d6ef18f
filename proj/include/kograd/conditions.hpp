#pragma once

#include <utility>
#include <vector>

#include "kograd/growth.hpp"
#include "kograd/improper.hpp"

namespace kograd {

struct ConditionOptions {
    /// Margin around the 1/p threshold of the growth-ratio conditions.
    double eps0 = 0.01;
    /// Tested A values; the report never claims more than these.
    std::vector<double> A_grid = {1.0, 2.0, 4.0, 8.0};
    /// Geometric s-grid for ratio sampling; the verdict uses the last decade.
    double s_lo = 1e2;
    double s_hi = 1e8;
    int s_count = 61;
    ImproperOptions improper;
};

enum class GrowthConditionKind { RatioLiminf, RatioLimsup, GrowthCap };
enum class HoldsVerdict { Holds, Fails, Inconclusive };

const char* to_string(GrowthConditionKind k);
const char* to_string(HoldsVerdict v);

/// Report of a growth comparison that is not an improper-integral test:
/// the liminf/limsup ratio conditions and the g <= C s^(p-1) growth cap.
struct GrowthConditionReport {
    GrowthConditionKind kind = GrowthConditionKind::GrowthCap;
    HoldsVerdict verdict = HoldsVerdict::Inconclusive;
    Method method = Method::NumericTrend;
    double threshold = 0.0;  // 1/p for the ratio conditions
    double eps0 = 0.0;
    std::vector<double> A_values;
    std::vector<double> estimated_limits;  // per A: tail liminf or limsup
    std::vector<double> s_grid;
    std::vector<std::vector<double>> ratio_samples;  // per A over s_grid

    bool holds() const { return verdict == HoldsVerdict::Holds; }
};

/// Blow-up test for the forcing term: integral of F(s)^(-1/p) over [1, inf).
/// Diverges means f grows slowly enough for entire solutions to be possible.
ConvergenceVerdict ko_f(const GrowthExpr& f, double p, const ConditionOptions& opt = {});

/// Blow-up test for the gradient term: integral of s^(p-2)/g(s).
ConvergenceVerdict ko_g(const GrowthExpr& g, double p, const ConditionOptions& opt = {});

/// integral of s^(p-1)/g(s): converges iff v stays bounded while v' explodes
/// at the end of the maximal interval.
ConvergenceVerdict v_bounded_at_blowup(const GrowthExpr& g, double p,
                                       const ConditionOptions& opt = {});

/// integral of s^(2(p-1))/g(s): divergence extends the nonexistence statement
/// toward W^{1,p} subsolutions and forces infinite gradient energy at blow-up.
ConvergenceVerdict sobolev_exclusion(const GrowthExpr& g, double p,
                                     const ConditionOptions& opt = {});

/// Minus-sign nonexistence test: integral of 1/Gamma_inv(F(s)).
ConvergenceVerdict gamma_condition(const GrowthExpr& f, const GrowthExpr& g, double p, int n,
                                   const ConditionOptions& opt = {});

/// Minus-sign existence tests: integrals of F(s)^(-1/p) and of 1/g_inv(f(s)).
/// Either divergence triggers the existence clause.
std::pair<ConvergenceVerdict, ConvergenceVerdict> pminus_existence(
    const GrowthExpr& f, const GrowthExpr& g, double p, const ConditionOptions& opt = {});

/// Ratio condition g(A F(s)^{1/p}) / (A^p f(s)) against 1/p, as a tail liminf
/// (kind RatioLiminf, used for p <= 2) or tail limsup (RatioLimsup, p >= 2).
GrowthConditionReport growth_ratio(const GrowthExpr& f, const GrowthExpr& g, double p,
                                   GrowthConditionKind kind, const ConditionOptions& opt = {});

/// Convenience overload choosing the side from p (liminf for p < 2, limsup
/// for p > 2, limsup at exactly 2 — callers probing both pass the kind).
GrowthConditionReport growth_ratio(const GrowthExpr& f, const GrowthExpr& g, double p,
                                   const ConditionOptions& opt = {});

/// Holds iff limsup g(s)/s^(p-1) < infinity.
GrowthConditionReport growth_cap(const GrowthExpr& g, double p,
                                 const ConditionOptions& opt = {});

}  // namespace kograd
