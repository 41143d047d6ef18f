#pragma once

#include <functional>
#include <vector>

#include "kograd/trajectory.hpp"

namespace kograd {

/// Residual of the one-dimensional radial operator against the right-hand
/// side for a twice-differentiable candidate v:
///
///   | sign(v') d/dr[ r^(n-1) |v'|^(p-1) ] - r^(n-1) (f(v) +- g(|v'|)) |
///
/// The flux derivative is a centered difference with step h. When dv is null
/// the slope is itself obtained by centered differences of v (same h).
/// Returns the maximum over the grid.
double residual_on_grid(const ProblemSpec& spec, const std::function<double(double)>& v,
                        const std::function<double(double)>& dv,
                        const std::vector<double>& r_grid, double h = 1e-4);

/// Self-consistency residual of a computed trajectory: per accepted step the
/// flux increment is compared with the integral of the right-hand side along
/// the step (Simpson with a Hermite midpoint), per unit length.
struct TrajectoryResidual {
    double max_abs = 0.0;     // worst defect per unit length
    double max_scaled = 0.0;  // worst defect scaled by the local term size
};

TrajectoryResidual residual_trajectory(const RadialTrajectory& traj, const ProblemSpec& spec);

}  // namespace kograd
