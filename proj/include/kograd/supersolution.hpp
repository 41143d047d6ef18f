#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kograd/derived.hpp"

namespace kograd {

/// The minus-sign comparison function vbar(r) = phi(R^(p/(p-1)) - r^(p/(p-1)))
/// where the decreasing profile phi is defined implicitly by
///
///     integral_{phi(t)}^{infinity} ds / Gamma_inv(F(s)) = t.
///
/// The profile is realized as a monotone table (psi ascending, t descending)
/// plus on-demand Newton refinement against the defining integral, so a
/// round trip t -> phi(t) -> t reproduces t at quadrature accuracy.
class Supersolution {
public:
    double R() const { return R_; }
    double vbar0() const { return vbar0_; }
    double t_largest() const { return t_of_psi_.front(); }
    double t_smallest() const { return t_of_psi_.back(); }
    const std::vector<double>& psi_table() const { return psi_; }
    const std::vector<double>& t_table() const { return t_of_psi_; }
    const DerivedFunctions& derived() const { return *derived_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// phi(t): throws RangeError outside the tabulated t range.
    double phi(double t) const;

    /// |phi'(t)| = Gamma_inv(F(phi(t))) by the defining relation.
    double phi_slope_abs(double t) const;

    /// phi''(t) from the defining relation (a table property).
    double phi_curvature(double t) const;

    /// The defining integral evaluated at a profile value (tail + cells).
    double t_of(double psi) const;

    double vbar(double r) const;

    friend Supersolution build_supersolution(const GrowthExpr& f, const GrowthExpr& g,
                                             double p, int n, double R, double tol);

private:
    double R_ = 0.0;
    double vbar0_ = 0.0;
    double tol_ = 1e-10;
    double tail_psi_ = 0.0;   // tail cut of the defining integral
    double tail_value_ = 0.0; // estimated integral beyond the cut
    std::vector<double> psi_;
    std::vector<double> t_of_psi_;
    std::shared_ptr<DerivedFunctions> derived_;
    std::vector<std::string> warnings_;

    double integrand(double s) const;
    double curvature_at_psi(double psi) const;
};

/// Builds the profile table. Preconditions: the Gamma condition must hold
/// (ConditionNotMetError otherwise) and R <= ((p-1)/p)^(p-1)
/// (PreconditionError). Throws TailError when the truncation remainder of the
/// defining integral cannot be bounded below tolerance, and reduces R with a
/// warning when the profile's t range cannot cover R^(p/(p-1)).
Supersolution build_supersolution(const GrowthExpr& f, const GrowthExpr& g, double p, int n,
                                  double R, double tol = 1e-10);

/// Pointwise check of the differential inequality
///   |phi'|^(p-2) phi'' + (p/(p-1))^(p-1) n |phi'|^(p-1) + g(|phi'|) <= f(phi)
/// on the validity window (0, eps) where phi(t) <= |phi'(t)|/2. The f and g
/// arguments are the functions under test (normally the ones the table was
/// built from; a mismatched f makes a negative-control run).
struct SupersolutionCheck {
    double min_slack = 0.0;
    double window_t_hi = 0.0;  // the located eps
    int nodes_checked = 0;
    std::vector<double> t_samples;
    std::vector<double> slack_samples;
};

SupersolutionCheck verify_supersolution(const Supersolution& ss, const GrowthExpr& f,
                                        const GrowthExpr& g);

/// Closed-form verification that u = exp(x1) satisfies
///   Delta_p u - [(p-1) u^(p-1) - |grad u|^p] = e^(p x1)  (>= 0)
/// on the grid, to machine precision.
struct ExpInequalityReport {
    bool holds = false;
    double max_rel_defect = 0.0;
};

ExpInequalityReport exp_inequality_check(double p, const std::vector<double>& x1_grid);

}  // namespace kograd
