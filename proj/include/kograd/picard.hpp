#pragma once

#include "kograd/trajectory.hpp"

namespace kograd {

struct PicardOptions {
    /// Uniform iteration grid: number of intervals (even).
    int intervals = 512;
    int max_iter = 300;
    /// C1 grid distance between successive iterates, relative to max(1, v0).
    double tol = 1e-13;
    /// Containment parameters of the local-existence construction;
    /// m2 < 0 selects the default v0/2.
    double m2 = -1.0;
    double m3 = 1.0;
};

/// Largest radius on which the integral operator provably maps the
/// containment ball into itself, from the local-existence recipe with the
/// sign-matched forcing bound (capped at 1).
double picard_r_alpha(const ProblemSpec& spec, double m2 = -1.0, double m3 = 1.0);

/// Solves the radial problem on [0, r1] by fixed-point iteration of the
/// integral operator
///   (T v)(r) = v0 + int_0^r [ int_0^s (t/s)^(n-1) (f(v) +- g(v')) dt ]^(1/(p-1)) ds
/// starting from the constant v0. Throws PreconditionError when r1 exceeds
/// the containment radius and NoConvergenceError when the C1 distance between
/// iterates fails to drop below tol.
RadialTrajectory picard_solve(const ProblemSpec& spec, double r1,
                              const PicardOptions& opt = {});

/// Raw fixed-point iteration on a uniform grid over [0, r_end]; used both by
/// picard_solve and as the series bootstrap of the marching integrator.
struct PicardGrid {
    std::vector<double> r;
    std::vector<long double> v;
    std::vector<long double> dv;
    int iterations = 0;
};

PicardGrid picard_iterate(const ProblemSpec& spec, double r_end, int intervals,
                          int max_iter, double tol);

}  // namespace kograd
