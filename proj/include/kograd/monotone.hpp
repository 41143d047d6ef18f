#pragma once

#include <functional>

namespace kograd {

struct InvertOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Bracket expansion doubles the upper end until h(hi) >= y, up to this cap.
    double bracket_cap = 1e30;
    int max_iter = 200;
};

/// Solves h(t) = y for a strictly increasing h on [0, inf).
///
/// The bracket [lo_hint, hi_hint] is expanded by doubling until it contains y;
/// the root is then refined by bisection with a secant step whenever the
/// secant candidate falls inside the bracket, so convergence is guaranteed.
/// Stops when |h(t) - y| <= abs_tol + rel_tol * max(1, |y|).
///
/// Throws RangeError when y < h(0) or y is unreachable below the bracket cap.
double invert_monotone(const std::function<double(double)>& h, double y,
                       double lo_hint = 0.0, double hi_hint = 1.0,
                       const InvertOptions& opt = {});

}  // namespace kograd
