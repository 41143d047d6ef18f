#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace kograd {

/// One term of an analytic growth expression: coeff * t^power * log(e+t)^logexp.
/// log(e+t) is used instead of log(t) so terms are finite at t = 0 while the
/// asymptotics as t -> infinity are unchanged.
struct GrowthTerm {
    double coeff = 1.0;
    double power = 1.0;
    double logexp = 0.0;
};

/// A monotone nonlinearity on [0, inf) with value conventionally 0 at t = 0.
///
/// Two representations:
///  - AnalyticSum: a sum of GrowthTerm, strictly increasing on (0, inf)
///    (sampled at construction), supporting exact derivatives and asymptotic
///    exponent extraction;
///  - OpaqueMonotone: a black-box evaluator declared strictly increasing
///    (library-only; not expressible in config files).
///
/// Instances are immutable after construction and safe to share across threads.
class GrowthExpr {
public:
    /// Builds an analytic sum. Throws std::invalid_argument when a term has a
    /// non-positive coefficient, a negative power, or is constant, and when
    /// sampled strict monotonicity fails.
    static GrowthExpr analytic(std::vector<GrowthTerm> terms);

    /// coeff * t^a
    static GrowthExpr power(double coeff, double a);

    /// coeff * t^a * log(e+t)^b
    static GrowthExpr power_log(double coeff, double a, double b);

    /// Black-box strictly increasing evaluator with fn(0) treated as 0.
    static GrowthExpr opaque(std::function<double(double)> fn, std::string label = "opaque");

    /// The identically-zero expression. Accepted only where a caller has
    /// explicitly opted into a test mode; see ProblemSpec.
    static GrowthExpr zero();

    double operator()(double t) const { return eval(t); }

    /// Value at t >= 0; exactly 0 at t = 0. Throws std::domain_error for t < 0.
    double eval(double t) const;
    long double eval(long double t) const;

    /// d/dt of the represented function at t > 0. Exact for the analytic
    /// family; central difference for opaque evaluators.
    double derivative(double t) const;
    long double derivative(long double t) const;

    bool is_analytic() const { return analytic_; }
    bool is_zero() const { return analytic_ && terms_.empty(); }

    /// Terms of the analytic sum. Throws UnsupportedError for opaque.
    const std::vector<GrowthTerm>& terms() const;

    /// Lexicographically dominant (power, logexp) pair as t -> infinity.
    /// Throws UnsupportedError for opaque or zero expressions.
    std::pair<double, double> asymptotic_signature() const;

    /// Sum of coefficients of the terms attaining the dominant signature.
    double leading_coeff() const;

    /// Smallest term power; governs behaviour near t = 0.
    double min_power() const;

    /// False when some term behaves like t^a with a < 1 near zero, in which
    /// case the function is not locally Lipschitz at 0. Opaque and zero
    /// expressions report true (nothing is claimed about them).
    bool lipschitz_at_zero() const;

    std::string describe() const;

private:
    GrowthExpr() = default;
    template <class Real>
    Real eval_impl(Real t) const;
    template <class Real>
    Real derivative_impl(Real t) const;

    bool analytic_ = true;
    std::vector<GrowthTerm> terms_;
    std::function<double(double)> opaque_;
    std::string label_;
};

}  // namespace kograd
