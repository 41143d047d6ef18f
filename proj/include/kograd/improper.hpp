#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace kograd {

enum class Verdict { Diverges, Converges, Inconclusive };
enum class Method { Symbolic, NumericTrend };

const char* to_string(Verdict v);
const char* to_string(Method m);

/// Tail model phi(s) ~ C * s^alpha * (log s)^beta as s -> infinity.
struct TailSignature {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Evidence backing a NumericTrend verdict: partial integrals at the cutoff
/// ladder and the fitted tail model.
struct NumericEvidence {
    std::vector<double> cutoffs;
    std::vector<double> partials;
    double alpha_fit = 0.0;
    double beta_fit = 0.0;
    bool used_log_model = false;
};

/// Three-valued convergence result for an improper integral over [lower, inf).
/// Symbolic verdicts are never Inconclusive.
struct ConvergenceVerdict {
    Verdict verdict = Verdict::Inconclusive;
    Method method = Method::Symbolic;
    std::optional<TailSignature> signature;
    std::optional<NumericEvidence> numeric;

    bool diverges() const { return verdict == Verdict::Diverges; }
    bool converges() const { return verdict == Verdict::Converges; }
    bool inconclusive() const { return verdict == Verdict::Inconclusive; }
};

/// Integrand for classify_improper: an evaluator, plus the analytic tail
/// signature when one is derivable.
struct IntegrandSpec {
    std::function<double(double)> eval;
    std::optional<TailSignature> signature;
};

struct ImproperOptions {
    /// Ignore the signature and classify from samples (used by agreement tests).
    bool force_numeric = false;
    /// Indecision band around the alpha = -1 boundary for the numeric path.
    double alpha_band = 0.02;
    /// Indecision band around beta = -1 once the log-factor model is engaged.
    double beta_band = 0.1;
    double quad_tol = 1e-8;
};

/// Bertrand rule: the tail integral of s^alpha (log s)^beta diverges iff
/// alpha > -1, or alpha = -1 and beta >= -1. Boundary comparisons use a small
/// floating-point tolerance.
Verdict verdict_from_signature(const TailSignature& sig);

/// Classifies integral of phi over [lower, inf) for a positive, eventually
/// monotone phi. With a signature the verdict is symbolic; otherwise partial
/// integrals are taken at cutoffs 1e3, 1e5, 1e7, 1e9 (computed in u = log s so
/// each decade costs the same) and the tail model is fitted from samples.
ConvergenceVerdict classify_improper(const IntegrandSpec& phi, double lower,
                                     const ImproperOptions& opt = {});

}  // namespace kograd
