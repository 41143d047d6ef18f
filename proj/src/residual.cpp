#include "kograd/residual.hpp"

#include <cmath>

#include "kograd/errors.hpp"

namespace kograd {

double residual_on_grid(const ProblemSpec& spec, const std::function<double(double)>& v,
                        const std::function<double(double)>& dv,
                        const std::vector<double>& r_grid, double h) {
    if (!(h > 0.0)) throw PreconditionError("residual_on_grid: needs h > 0");
    const double p = spec.p;
    const double sgn = spec.sign_factor();

    auto slope = [&](double x) {
        if (dv) return dv(x);
        return (v(x + h) - v(x - h)) / (2.0 * h);
    };
    auto flux = [&](double x) {
        return std::pow(x, spec.n - 1.0) * std::pow(std::fabs(slope(x)), p - 1.0);
    };

    double worst = 0.0;
    for (double r : r_grid) {
        double s = slope(r);
        double dflux = (flux(r + h) - flux(r - h)) / (2.0 * h);
        double lhs = (s >= 0.0 ? 1.0 : -1.0) * dflux;
        double rhs = std::pow(r, spec.n - 1.0) *
                     (spec.f.eval(v(r)) + sgn * spec.g.eval(std::fabs(s)));
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

TrajectoryResidual residual_trajectory(const RadialTrajectory& traj, const ProblemSpec& spec) {
    TrajectoryResidual out;
    const auto& nodes = traj.nodes;
    if (nodes.size() < 2) return out;
    const long double p = spec.p;
    const long double sgn = spec.sign_factor();
    const long double nm1 = spec.n - 1;

    auto rhs_at = [&](long double r, long double v, long double dv) -> long double {
        return std::pow(r, nm1) * (spec.f.eval(v) + sgn * spec.g.eval(std::fabs(dv)));
    };

    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const auto& a = nodes[i];
        const auto& b = nodes[i + 1];
        long double dr = (long double)b.r - a.r;
        if (!(dr > 0.0L)) continue;
        long double flux_a = std::pow((long double)a.r, nm1) * std::pow(a.dv, p - 1.0L);
        long double flux_b = std::pow((long double)b.r, nm1) * std::pow(b.dv, p - 1.0L);

        // Hermite midpoint of (v, v') for the Simpson rule on the step.
        long double rm = 0.5L * ((long double)a.r + b.r);
        long double vm = 0.5L * (a.v + b.v) + dr / 8.0L * (a.dv - b.dv);
        long double dvm = 1.5L * (b.v - a.v) / dr - 0.25L * (a.dv + b.dv);
        long double fa = rhs_at(a.r, a.v, a.dv);
        long double fm = rhs_at(rm, vm, dvm);
        long double fb = rhs_at(b.r, b.v, b.dv);
        long double integral = dr / 6.0L * (fa + 4.0L * fm + fb);

        long double defect = std::fabs(flux_b - flux_a - integral) / dr;
        if (!std::isfinite((double)defect)) continue;
        long double scale = std::max({(long double)1.0L, std::fabs(flux_b - flux_a) / dr,
                                      std::fabs(fa), std::fabs(fb)});
        out.max_abs = std::max(out.max_abs, (double)defect);
        out.max_scaled = std::max(out.max_scaled, (double)(defect / scale));
    }
    return out;
}

}  // namespace kograd
