#pragma once

#include <string>
#include <vector>

#include "kograd/problem.hpp"

namespace kograd {

/// One sample of the radial solution. v and dv are kept in extended precision
/// because admissible solutions can grow past the double range on long runs;
/// the diagnostic series A and W are meaningful at moderate scales and are
/// stored as NaN where they overflow.
struct TrajectoryNode {
    double r = 0.0;
    long double v = 0.0;
    long double dv = 0.0;
    double A = 0.0;  // r^(n-1) v' / F(v)^(1/p)
    double W = 0.0;  // 1 + g(v')/f(v) - (v')^p / (p F(v))
};

enum class TerminationKind { ReachedRmax, BlowUp, StepCollapse };

const char* to_string(TerminationKind k);

struct Termination {
    TerminationKind kind = TerminationKind::ReachedRmax;
    double r_last = 0.0;
    /// Estimated blow-up radius and its uncertainty (last accepted step).
    double R_est = 0.0;
    double R_uncertainty = 0.0;
    /// Whether v stays bounded while v' explodes (BlowUp only).
    bool v_bounded = false;
};

struct RadialTrajectory {
    std::vector<TrajectoryNode> nodes;
    Termination termination;
    std::vector<std::string> warnings;

    double r_first() const { return nodes.front().r; }
    double r_last() const { return nodes.back().r; }
};

struct ValueSlope {
    long double v = 0.0;
    long double dv = 0.0;
};

/// Cubic Hermite evaluation of (v, v') at r inside the node range.
ValueSlope eval_trajectory(const RadialTrajectory& traj, double r);

/// Pass/fail report of the a priori solution properties: positivity of v and
/// v', convexity (nonnegative second divided differences up to tolerance) and
/// the affine bound v(r) <= v0 + R v'(r). For the minus sign it also verifies
/// f(v) - g(v') >= 0 along the path.
struct AprioriReport {
    bool v_positive = false;
    bool dv_positive = false;
    bool convex = false;
    bool affine_bound = false;
    bool sign_ok = true;  // minus sign only; true otherwise
    double min_v = 0.0;
    double min_dv = 0.0;
    double worst_second_diff = 0.0;    // most negative, scaled by max |v|
    double worst_affine_margin = 0.0;  // min of (v0 + R v' - v), scaled
    double worst_sign_margin = 0.0;    // min of (f - g)/max(f, g, 1)

    bool pass() const {
        return v_positive && dv_positive && convex && affine_bound && sign_ok;
    }
};

AprioriReport apriori_check(const RadialTrajectory& traj, const ProblemSpec& spec);

/// Running integral of (v')^p at each node (trapezoidal), used to follow the
/// gradient-energy divergence toward a blow-up radius.
std::vector<long double> gradient_energy(const RadialTrajectory& traj, double p);

/// Numerical verification of the derivative identity
///   A'(r) (v')^(p-2) = r^(n-1) f(v) W(r) / F(v)^(1/p)
///                      - (p-2) r^(n-1) (v')^(p-2) v'' / F(v)^(1/p)
/// along a plus-sign trajectory: A' comes from a five-point finite-difference
/// stencil, v'' from the equation itself. Returns the worst defect scaled by
/// the local term magnitude.
struct IdentityReport {
    double max_defect = 0.0;
    int nodes_checked = 0;
};

IdentityReport diagnostics_identity_check(const RadialTrajectory& traj,
                                          const ProblemSpec& spec);

/// Finite-difference weights for the m-th derivative at x0 from the given
/// stencil nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

class PrimitiveCache;

/// Fills the A and W diagnostic series of every node; NaN where they are not
/// finite (overflowing v, or a test-mode zero f).
void fill_diagnostics(RadialTrajectory& traj, const ProblemSpec& spec,
                      const PrimitiveCache& F);

}  // namespace kograd
