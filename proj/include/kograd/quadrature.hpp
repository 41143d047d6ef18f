#pragma once

#include <functional>

namespace kograd {

struct QuadOptions {
    /// Target: total error estimate <= tol * max(1, |integral|).
    double tol = 1e-10;
    int max_intervals = 8000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 quadrature on [a, b].
///
/// The rule never evaluates the endpoints, so integrable power-type endpoint
/// singularities are handled by the graded subdivision toward the endpoint.
/// Throws NonFiniteError when the integrand returns NaN/Inf at an interior
/// node, and PreconditionError when a > b.
QuadResult quad_full(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

/// As quad_full, but returns the value and throws NoConvergenceError when the
/// requested tolerance was missed by more than a small slack factor.
double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

}  // namespace kograd
