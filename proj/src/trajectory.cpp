#include "kograd/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kograd/primitive.hpp"

namespace kograd {

const char* to_string(TerminationKind k) {
    switch (k) {
        case TerminationKind::ReachedRmax: return "ReachedRmax";
        case TerminationKind::BlowUp: return "BlowUp";
        default: return "StepCollapse";
    }
}

ValueSlope eval_trajectory(const RadialTrajectory& traj, double r) {
    const auto& nodes = traj.nodes;
    if (nodes.empty()) throw std::invalid_argument("eval_trajectory: empty trajectory");
    if (r <= nodes.front().r) return {nodes.front().v, nodes.front().dv};
    if (r >= nodes.back().r) return {nodes.back().v, nodes.back().dv};
    auto it = std::lower_bound(nodes.begin(), nodes.end(), r,
                               [](const TrajectoryNode& n, double x) { return n.r < x; });
    const TrajectoryNode& b = *it;
    const TrajectoryNode& a = *(it - 1);
    long double h = (long double)b.r - (long double)a.r;
    long double t = ((long double)r - (long double)a.r) / h;
    long double t2 = t * t, t3 = t2 * t;
    long double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    long double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    ValueSlope out;
    out.v = h00 * a.v + h10 * h * a.dv + h01 * b.v + h11 * h * b.dv;
    // Derivative of the same cubic.
    long double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    long double d01 = (6 * t - 6 * t2) / h, d11 = 3 * t2 - 2 * t;
    out.dv = d00 * a.v + d10 * a.dv + d01 * b.v + d11 * b.dv;
    return out;
}

AprioriReport apriori_check(const RadialTrajectory& traj, const ProblemSpec& spec) {
    AprioriReport rep;
    const auto& nodes = traj.nodes;
    if (nodes.size() < 3) throw std::invalid_argument("apriori_check: trajectory too short");

    long double vmax = 0.0, min_v = INFINITY, min_dv = INFINITY;
    for (const auto& n : nodes) {
        vmax = std::max(vmax, n.v);
        min_v = std::min(min_v, n.v);
        min_dv = std::min(min_dv, n.dv);
    }
    rep.min_v = static_cast<double>(min_v);
    rep.min_dv = static_cast<double>(min_dv);
    rep.v_positive = min_v > 0.0L;
    rep.dv_positive = min_dv > 0.0L;

    // Convexity via second divided differences, scaled by max |v|. Where the
    // v increments sit below the floating-point resolution of v itself (flat
    // start of the trajectory) the curvature is taken from the slope series
    // instead, which keeps full resolution.
    const long double eps_v = 64.0L * std::numeric_limits<long double>::epsilon();
    long double worst_d2 = 0.0;
    for (size_t i = 1; i + 1 < nodes.size(); ++i) {
        long double h0 = (long double)nodes[i].r - nodes[i - 1].r;
        long double h1 = (long double)nodes[i + 1].r - nodes[i].r;
        long double d0 = nodes[i].v - nodes[i - 1].v;
        long double d1 = nodes[i + 1].v - nodes[i].v;
        long double d2;
        if (d0 > eps_v * nodes[i].v && d1 > eps_v * nodes[i].v)
            d2 = 2.0L * (d1 / h1 - d0 / h0) / (h0 + h1);
        else
            d2 = (nodes[i + 1].dv - nodes[i - 1].dv) / (h0 + h1);
        worst_d2 = std::min(worst_d2, d2);
    }
    rep.worst_second_diff = static_cast<double>(worst_d2 / vmax);
    rep.convex = worst_d2 >= -1e-8L * vmax;

    // Affine bound v <= v0 + R v' with R the trajectory extent.
    long double R = nodes.back().r;
    long double worst_aff = INFINITY;
    for (const auto& n : nodes) {
        long double margin = (long double)spec.v0 + R * n.dv - n.v;
        worst_aff = std::min(worst_aff, margin / std::max(1.0L, n.v));
    }
    rep.worst_affine_margin = static_cast<double>(worst_aff);
    rep.affine_bound = worst_aff >= -1e-8L;

    if (spec.sign == Sign::Minus && !spec.g.is_zero() && !spec.f.is_zero()) {
        long double worst = INFINITY;
        for (const auto& n : nodes) {
            long double fv = spec.f.eval(n.v);
            long double gd = spec.g.eval(n.dv);
            long double margin = (fv - gd) / std::max({fv, gd, 1.0L});
            worst = std::min(worst, margin);
        }
        rep.worst_sign_margin = static_cast<double>(worst);
        rep.sign_ok = worst >= -1e-9L;
    }
    return rep;
}

std::vector<long double> gradient_energy(const RadialTrajectory& traj, double p) {
    std::vector<long double> acc(traj.nodes.size(), 0.0L);
    for (size_t i = 1; i < traj.nodes.size(); ++i) {
        const auto& a = traj.nodes[i - 1];
        const auto& b = traj.nodes[i];
        long double fa = std::pow(a.dv, (long double)p);
        long double fb = std::pow(b.dv, (long double)p);
        acc[i] = acc[i - 1] + 0.5L * (fa + fb) * ((long double)b.r - a.r);
    }
    return acc;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
    // Fornberg (1988), Mathematics of Computation 51.
    const int n = static_cast<int>(nodes.size()) - 1;
    const int m = order;
    std::vector<std::vector<std::vector<double>>> d(
        n + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(m + 1, 0.0)));
    d[0][0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i <= n; ++i) {
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            for (int k = 0; k <= std::min(i, m); ++k) {
                double prev = k > 0 ? d[i - 1][j][k - 1] : 0.0;
                d[i][j][k] = ((nodes[i] - x0) * d[i - 1][j][k] - k * prev) / c3;
            }
        }
        for (int k = 0; k <= std::min(i, m); ++k) {
            double prev = k > 0 ? d[i - 1][i - 1][k - 1] : 0.0;
            d[i][i][k] = c1 / c2 * (k * prev - (nodes[i - 1] - x0) * d[i - 1][i - 1][k]);
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int j = 0; j <= n; ++j) w[j] = d[n][j][m];
    return w;
}

void fill_diagnostics(RadialTrajectory& traj, const ProblemSpec& spec,
                      const PrimitiveCache& F) {
    for (auto& n : traj.nodes) {
        n.A = std::numeric_limits<double>::quiet_NaN();
        n.W = std::numeric_limits<double>::quiet_NaN();
        double v = static_cast<double>(n.v);
        double dv = static_cast<double>(n.dv);
        if (!std::isfinite(v) || !std::isfinite(dv) || v < 0.0 || dv < 0.0) continue;
        double Fv = F(v);
        if (!std::isfinite(Fv) || !(Fv > 0.0)) continue;
        double A = std::pow(n.r, spec.n - 1.0) * dv / std::pow(Fv, 1.0 / spec.p);
        if (std::isfinite(A)) n.A = A;
        double fv = spec.f.eval(v);
        if (fv > 0.0) {
            double W = 1.0 + spec.g.eval(dv) / fv -
                       std::pow(dv, spec.p) / (spec.p * Fv);
            if (std::isfinite(W)) n.W = W;
        }
    }
}

IdentityReport diagnostics_identity_check(const RadialTrajectory& traj,
                                          const ProblemSpec& spec) {
    if (spec.sign != Sign::Plus)
        throw std::invalid_argument("diagnostics_identity_check: plus-sign trajectories only");
    IdentityReport rep;
    const auto& nodes = traj.nodes;
    if (nodes.size() < 7) return rep;

    PrimitiveCache F(spec.f);
    const double p = spec.p;
    const double r0 = nodes.front().r;
    for (size_t i = 2; i + 2 < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        if (nd.r < 10.0 * r0) continue;
        if (!std::isfinite(nd.A) || !std::isfinite(nd.W)) continue;
        bool ok = true;
        for (size_t j = i - 2; j <= i + 2; ++j)
            if (!std::isfinite(nodes[j].A)) ok = false;
        if (!ok) continue;

        std::vector<double> xs(5), as(5);
        for (int k = 0; k < 5; ++k) {
            xs[k] = nodes[i - 2 + k].r;
            as[k] = nodes[i - 2 + k].A;
        }
        auto w = fd_weights(nd.r, xs, 1);
        double dA = 0.0;
        for (int k = 0; k < 5; ++k) dA += w[k] * as[k];

        double r = nd.r;
        double v = static_cast<double>(nd.v);
        double dv = static_cast<double>(nd.dv);
        double fv = spec.f.eval(v);
        double gdv = spec.g.eval(dv);
        double Fv = F(v);
        double rn = std::pow(r, spec.n - 1.0);
        double wst = std::pow(dv, p - 1.0);
        // v'' from the equation (plus sign).
        double wprime = fv + gdv - (spec.n - 1.0) / r * wst;
        double vpp = wprime * std::pow(wst, (2.0 - p) / (p - 1.0)) / (p - 1.0);

        double lhs = dA * std::pow(dv, p - 2.0);
        double term1 = rn * fv / std::pow(Fv, 1.0 / p) * nd.W;
        double term2 = (p - 2.0) * rn * std::pow(dv, p - 2.0) * vpp / std::pow(Fv, 1.0 / p);
        double scale = std::max({std::fabs(term1), std::fabs(term2), std::fabs(lhs), 1e-300});
        double defect = std::fabs(lhs - (term1 - term2)) / scale;
        if (!std::isfinite(defect)) continue;
        rep.max_defect = std::max(rep.max_defect, defect);
        ++rep.nodes_checked;
    }
    return rep;
}

}  // namespace kograd
