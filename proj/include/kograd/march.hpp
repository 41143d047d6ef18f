#pragma once

#include "kograd/trajectory.hpp"

namespace kograd {

struct MarchControls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Node spacing cap: accepted steps keep r_{i+1}/r_i <= max_ratio so the
    /// finite-difference diagnostics stay reliable.
    double max_ratio = 1.05;
    /// v' level at which the finite-radius pole test begins.
    double blowup_dv = 1e12;
    /// Step floor as a fraction of r; collapsing below it ends the run.
    double min_step_frac = 1e-14;
    /// Start radius of the marcher; negative selects 1e-6 * min(1, r_max).
    /// The state there comes from a fixed-point bootstrap on [0, r_start].
    double r_start = -1.0;

    enum class Stepper { Auto, Rk45, Rosenbrock };
    /// Auto: explicit RK for the plus sign, L-stable Rosenbrock for the minus
    /// sign (the gradient term makes the w-equation stiffly attracting).
    Stepper stepper = Stepper::Auto;
};

/// Integrates the first-order system v' = w^(1/(p-1)),
/// w' = f(v) +- g(v') - ((n-1)/r) w from a bootstrapped state near the
/// origin. Terminates at r_max, or with a BlowUp record (estimated radius,
/// uncertainty, boundedness of v) when a finite-radius pole is detected, or
/// with StepCollapse when the step floor is hit without a pole signature.
RadialTrajectory march(const ProblemSpec& spec, double r_max,
                       const MarchControls& controls = {});

}  // namespace kograd
