#include "kograd/march.hpp"

#include <cmath>

#include "kograd/conditions.hpp"
#include "kograd/errors.hpp"
#include "kograd/picard.hpp"
#include "kograd/primitive.hpp"

namespace kograd {

namespace {

using Real = long double;

struct State {
    Real v = 0.0L;
    Real w = 0.0L;  // (v')^(p-1)
};

struct Deriv {
    Real dv = 0.0L;
    Real dw = 0.0L;
    bool finite() const { return std::isfinite(dv) && std::isfinite(dw); }
};

struct System {
    const ProblemSpec& spec;
    Real m;    // 1/(p-1)
    Real sgn;  // +1 / -1
    Real nm1;  // n-1

    Real slope(Real w) const {  // v' = w^(1/(p-1))
        if (!(w > 0.0L)) return w == 0.0L ? 0.0L : NAN;
        return std::pow(w, m);
    }

    Deriv rhs(Real r, const State& y) const {
        Deriv d;
        Real vp = slope(y.w);
        // A trial stage leaving the admissible region signals a rejected step.
        if (!std::isfinite(vp) || !std::isfinite(y.v) || y.v < 0.0L) {
            d.dv = d.dw = NAN;
            return d;
        }
        d.dv = vp;
        d.dw = spec.f.eval(y.v) + sgn * spec.g.eval(vp) - nm1 / r * y.w;
        return d;
    }

    // Jacobian of the rhs and its explicit r-derivative (Rosenbrock only).
    void jacobian(Real r, const State& y, Real J[2][2], Real T[2]) const {
        Real vp = slope(y.w);
        Real dvp_dw = y.w > 0.0L ? m * std::pow(y.w, m - 1.0L) : 0.0L;
        J[0][0] = 0.0L;
        J[0][1] = dvp_dw;
        J[1][0] = y.v > 0.0L ? (Real)spec.f.derivative(y.v) : 0.0L;
        J[1][1] = (vp > 0.0L ? sgn * (Real)spec.g.derivative(vp) * dvp_dw : 0.0L) - nm1 / r;
        T[0] = 0.0L;
        T[1] = nm1 * y.w / (r * r);
    }
};

Real error_norm(const State& y, const State& ynew, const Real err[2],
                const MarchControls& c) {
    Real acc = 0.0L;
    const Real vals[2][2] = {{y.v, ynew.v}, {y.w, ynew.w}};
    for (int i = 0; i < 2; ++i) {
        Real sk = (Real)c.abs_tol +
                  (Real)c.rel_tol * std::max(std::fabs(vals[i][0]), std::fabs(vals[i][1]));
        Real q = err[i] / sk;
        acc += q * q;
    }
    return std::sqrt(acc / 2.0L);
}

// One Dormand-Prince 5(4) step; returns false when any stage is non-finite.
bool dp45_step(const System& sys, Real r, const State& y, Real h, const Deriv& k1,
               State& ynew, Deriv& k_last, Real err[2]) {
    static const Real a21 = 1.0L / 5;
    static const Real a31 = 3.0L / 40, a32 = 9.0L / 40;
    static const Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
    static const Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187,
                      a53 = 64448.0L / 6561, a54 = -212.0L / 729;
    static const Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
                      a64 = 49.0L / 176, a65 = -5103.0L / 18656;
    static const Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192,
                      b5 = -2187.0L / 6784, b6 = 11.0L / 84;
    static const Real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
                      e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;
    static const Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;

    auto at = [&](Real dv, Real dw) { return State{y.v + h * dv, y.w + h * dw}; };

    Deriv k2 = sys.rhs(r + c2 * h, at(a21 * k1.dv, a21 * k1.dw));
    if (!k2.finite()) return false;
    Deriv k3 = sys.rhs(r + c3 * h, at(a31 * k1.dv + a32 * k2.dv, a31 * k1.dw + a32 * k2.dw));
    if (!k3.finite()) return false;
    Deriv k4 = sys.rhs(r + c4 * h, at(a41 * k1.dv + a42 * k2.dv + a43 * k3.dv,
                                      a41 * k1.dw + a42 * k2.dw + a43 * k3.dw));
    if (!k4.finite()) return false;
    Deriv k5 = sys.rhs(r + c5 * h,
                       at(a51 * k1.dv + a52 * k2.dv + a53 * k3.dv + a54 * k4.dv,
                          a51 * k1.dw + a52 * k2.dw + a53 * k3.dw + a54 * k4.dw));
    if (!k5.finite()) return false;
    Deriv k6 = sys.rhs(r + h,
                       at(a61 * k1.dv + a62 * k2.dv + a63 * k3.dv + a64 * k4.dv + a65 * k5.dv,
                          a61 * k1.dw + a62 * k2.dw + a63 * k3.dw + a64 * k4.dw + a65 * k5.dw));
    if (!k6.finite()) return false;

    ynew.v = y.v + h * (b1 * k1.dv + b3 * k3.dv + b4 * k4.dv + b5 * k5.dv + b6 * k6.dv);
    ynew.w = y.w + h * (b1 * k1.dw + b3 * k3.dw + b4 * k4.dw + b5 * k5.dw + b6 * k6.dw);
    if (!std::isfinite(ynew.v) || !std::isfinite(ynew.w)) return false;

    Deriv k7 = sys.rhs(r + h, ynew);
    if (!k7.finite()) return false;
    err[0] = h * (e1 * k1.dv + e3 * k3.dv + e4 * k4.dv + e5 * k5.dv + e6 * k6.dv + e7 * k7.dv);
    err[1] = h * (e1 * k1.dw + e3 * k3.dw + e4 * k4.dw + e5 * k5.dw + e6 * k6.dw + e7 * k7.dw);
    k_last = k7;  // FSAL
    return true;
}

// One step of the L-stable Rosenbrock pair (the ode23s scheme of Shampine &
// Reichelt); the 2x2 stage systems are solved in closed form.
bool ros23_step(const System& sys, Real r, const State& y, Real h, const Deriv& f0,
                State& ynew, Real err[2]) {
    static const Real d = 1.0L / (2.0L + std::sqrt(2.0L));
    static const Real e32 = 6.0L + std::sqrt(2.0L);

    Real J[2][2], T[2];
    sys.jacobian(r, y, J, T);
    Real w11 = 1.0L - h * d * J[0][0], w12 = -h * d * J[0][1];
    Real w21 = -h * d * J[1][0], w22 = 1.0L - h * d * J[1][1];
    Real det = w11 * w22 - w12 * w21;
    if (!std::isfinite(det) || det == 0.0L) return false;
    auto solve = [&](Real b1, Real b2, Real& x1, Real& x2) {
        x1 = (b1 * w22 - b2 * w12) / det;
        x2 = (w11 * b2 - w21 * b1) / det;
    };

    Real k1v, k1w;
    solve(f0.dv + h * d * T[0], f0.dw + h * d * T[1], k1v, k1w);
    Deriv f1 = sys.rhs(r + 0.5L * h, {y.v + 0.5L * h * k1v, y.w + 0.5L * h * k1w});
    if (!f1.finite()) return false;
    Real k2v, k2w;
    solve(f1.dv - k1v, f1.dw - k1w, k2v, k2w);
    k2v += k1v;
    k2w += k1w;
    ynew.v = y.v + h * k2v;
    ynew.w = y.w + h * k2w;
    if (!std::isfinite(ynew.v) || !std::isfinite(ynew.w)) return false;
    Deriv f2 = sys.rhs(r + h, ynew);
    if (!f2.finite()) return false;
    Real k3v, k3w;
    solve(f2.dv - e32 * (k2v - f1.dv) - 2.0L * (k1v - f0.dv) + h * d * T[0],
          f2.dw - e32 * (k2w - f1.dw) - 2.0L * (k1w - f0.dw) + h * d * T[1], k3v, k3w);
    err[0] = h / 6.0L * (k1v - 2.0L * k2v + k3v);
    err[1] = h / 6.0L * (k1w - 2.0L * k2w + k3w);
    return std::isfinite(err[0]) && std::isfinite(err[1]);
}

// Two-point extrapolation of 1/v' to zero; returns the estimated pole radius
// or infinity when v' is not increasing.
double pole_estimate(double r_prev, Real dv_prev, double r_last, Real dv_last) {
    if (!(dv_last > dv_prev) || !(dv_prev > 0.0L)) return INFINITY;
    Real ya = 1.0L / dv_prev, yb = 1.0L / dv_last;
    return r_last + static_cast<double>(yb * (Real)(r_last - r_prev) / (ya - yb));
}

}  // namespace

RadialTrajectory march(const ProblemSpec& spec, double r_max, const MarchControls& c) {
    spec.validate();
    if (!(r_max > 0.0)) throw PreconditionError("march: needs r_max > 0");

    double r_start = c.r_start > 0.0 ? c.r_start : 1e-6 * std::min(1.0, r_max);
    r_start = std::min(r_start, 0.25 * r_max);

    // Series start: fixed-point bootstrap of the integral operator on
    // [0, r_start] captures the f and g contributions to all orders needed.
    PicardGrid boot = picard_iterate(spec, r_start, 64, 200, 1e-15);

    System sys{spec, 1.0L / ((long double)spec.p - 1.0L), (long double)spec.sign_factor(),
               (long double)(spec.n - 1)};

    const bool use_rosenbrock =
        c.stepper == MarchControls::Stepper::Rosenbrock ||
        (c.stepper == MarchControls::Stepper::Auto && spec.sign == Sign::Minus &&
         !spec.g.is_zero());
    const Real order_exp = use_rosenbrock ? 1.0L / 3.0L : 1.0L / 5.0L;

    RadialTrajectory traj;
    State y{boot.v.back(), std::pow(boot.dv.back(), (long double)spec.p - 1.0L)};
    double r = r_start;
    traj.nodes.push_back({r, y.v, boot.dv.back(), 0.0, 0.0});

    const double sign_tol = std::max(1e-6, 1e3 * c.rel_tol);
    Real h = (Real)((c.max_ratio - 1.0) * r_start * 0.5);
    Deriv k1 = sys.rhs(r, y);
    int consecutive_bad = 0;
    bool done = false;

    auto finish_blowup = [&](double R_est, double uncertainty) {
        traj.termination.kind = TerminationKind::BlowUp;
        traj.termination.r_last = r;
        traj.termination.R_est = R_est;
        traj.termination.R_uncertainty = uncertainty;

        // v trend toward the pole: the v increment per decade of v' decays
        // geometrically when v stays bounded and stalls (or grows) when v
        // explodes. The gray zone defers to the tail integral verdict.
        Real dv_last = traj.nodes.back().dv;
        Real dv_first = traj.nodes.front().dv;
        int K = 4;
        while (K > 1 && dv_last * std::pow(10.0L, (Real)(-K)) < 10.0L * dv_first) --K;
        auto v_at_level = [&](Real level) {
            for (const auto& node : traj.nodes)
                if (node.dv >= level) return node.v;
            return traj.nodes.back().v;
        };
        Real factor = 2.0L;  // default: treat as unbounded
        if (K >= 2) {
            std::vector<Real> inc;
            for (int k = 0; k <= K - 1; ++k) {
                Real lo = dv_last * std::pow(10.0L, (Real)(k - K));
                Real hi = lo * 10.0L;
                Real d = v_at_level(hi) - v_at_level(lo);
                inc.push_back(std::max(d, (Real)0.0L));
            }
            if (inc.front() > 0.0L && inc.back() >= 0.0L)
                factor = std::pow(std::max(inc.back(), (Real)1e-30L) / inc.front(),
                                  1.0L / (Real)(K - 1));
        }
        bool bounded;
        bool trend_decisive = factor <= 0.5L || factor >= 0.9L;
        Verdict integral = Verdict::Inconclusive;
        if (spec.g.is_analytic() && !spec.g.is_zero())
            integral = v_bounded_at_blowup(spec.g, spec.p).verdict;
        if (trend_decisive) {
            bounded = factor <= 0.5L;
            if (integral != Verdict::Inconclusive && (integral == Verdict::Converges) != bounded)
                traj.warnings.push_back(
                    "v_bounded trend disagrees with the tail integral verdict");
        } else if (integral != Verdict::Inconclusive) {
            bounded = integral == Verdict::Converges;
        } else {
            bounded = factor < 0.75L;
        }
        traj.termination.v_bounded = bounded;
        done = true;
    };

    while (!done) {
        const Real h_floor = (Real)(c.min_step_frac * r);
        if (r >= r_max || (Real)r_max - (Real)r < h_floor) {
            // Within rounding of the endpoint counts as reaching it.
            traj.termination.kind = TerminationKind::ReachedRmax;
            traj.termination.r_last = r;
            break;
        }
        // Step-size caps: spacing ratio for diagnostics, and the endpoint.
        h = std::min(h, (Real)((c.max_ratio - 1.0) * r));
        if ((Real)r + h > (Real)r_max) h = (Real)r_max - (Real)r;
        if (h < h_floor) {
            // Decide pole vs plain collapse: the slope must have exploded
            // relative to mid-trajectory and 1/v' must extrapolate to zero
            // just ahead of the current radius.
            const auto& nb = traj.nodes.back();
            double R_est = INFINITY;
            if (traj.nodes.size() >= 2) {
                const auto& na = traj.nodes[traj.nodes.size() - 2];
                R_est = pole_estimate(na.r, na.dv, nb.r, nb.dv);
            }
            Real dv_mid = traj.nodes.front().dv;
            for (const auto& node : traj.nodes)
                if (node.r <= 0.5 * r) dv_mid = node.dv;
            bool pole = nb.dv >= 100.0L && nb.dv >= 100.0L * std::max(dv_mid, (Real)1e-30L) &&
                        std::isfinite(R_est) && R_est - r <= 1e-3 * r;
            if (pole) {
                double last_step = traj.nodes.size() >= 2
                                       ? nb.r - traj.nodes[traj.nodes.size() - 2].r
                                       : static_cast<double>(h);
                finish_blowup(R_est, last_step);
            } else {
                traj.termination.kind = TerminationKind::StepCollapse;
                traj.termination.r_last = r;
                traj.warnings.push_back("step collapse without a blow-up signature");
                done = true;
            }
            break;
        }

        State ynew;
        Real err[2];
        bool ok;
        Deriv k_last = k1;
        if (use_rosenbrock)
            ok = ros23_step(sys, (Real)r, y, h, k1, ynew, err);
        else
            ok = dp45_step(sys, (Real)r, y, h, k1, ynew, k_last, err);

        Real enorm = ok ? error_norm(y, ynew, err, c) : NAN;
        if (!ok || !std::isfinite(enorm)) {
            h *= 0.3L;
            if (++consecutive_bad > 200) {
                traj.termination.kind = TerminationKind::StepCollapse;
                traj.termination.r_last = r;
                traj.warnings.push_back("non-finite right-hand side");
                break;
            }
            continue;
        }
        consecutive_bad = 0;

        if (enorm <= 1.0L) {
            double r_prev = r;
            Real dv_prev = traj.nodes.back().dv;
            r = static_cast<double>((Real)r + h);
            y = ynew;
            k1 = use_rosenbrock ? sys.rhs((Real)r, y) : k_last;
            Real dv = sys.slope(y.w);
            traj.nodes.push_back({r, y.v, dv, 0.0, 0.0});

            if (spec.sign == Sign::Minus && !spec.f.is_zero() && !spec.g.is_zero()) {
                Real fv = spec.f.eval(y.v);
                Real gd = spec.g.eval(dv);
                if (fv - gd < -(Real)sign_tol * std::max({fv, gd, (Real)1.0L}))
                    throw NoConvergenceError(
                        "march: f(v) - g(v') went negative on a minus-sign run; "
                        "tolerances are insufficient for this problem");
            }

            if (dv >= (Real)c.blowup_dv) {
                double R_est = pole_estimate(r_prev, dv_prev, r, dv);
                if (std::isfinite(R_est) && R_est - r <= 1e-4 * std::max(r, 1e-3)) {
                    finish_blowup(R_est, r - r_prev);
                    break;
                }
            }
            Real grow = 0.9L * std::pow(std::max(enorm, (Real)1e-10L), -order_exp);
            h *= std::min((Real)5.0L, std::max((Real)0.2L, grow));
        } else {
            h *= std::max((Real)0.1L, 0.9L * std::pow(enorm, -order_exp));
        }
    }

    PrimitiveCache F(spec.f);
    fill_diagnostics(traj, spec, F);
    return traj;
}

}  // namespace kograd
