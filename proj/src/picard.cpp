#include "kograd/picard.hpp"

#include <cmath>

#include "kograd/errors.hpp"
#include "kograd/primitive.hpp"

namespace kograd {

namespace {

// Cumulative integral of samples on a uniform grid by Simpson pairs; the
// odd-node partial uses the quadratic through the pair (5,8,-1)/12 rule.
// The integrands here vanish at t = 0 like fractional powers, where the
// quadratic rule can even go negative, so the first pair is integrated by a
// local power fit phi ~ c t^gamma instead.
void cumulative_simpson(const std::vector<long double>& phi, long double h,
                        std::vector<long double>& out) {
    const size_t n = phi.size();
    out.assign(n, 0.0L);
    if (n < 3) return;
    if (phi[0] == 0.0L && phi[1] > 0.0L && phi[2] >= phi[1]) {
        long double gamma = std::min(std::log2(phi[2] / phi[1]), 40.0L);
        out[1] = h * phi[1] / (gamma + 1.0L);
        out[2] = 2.0L * h * phi[2] / (gamma + 1.0L);
    } else {
        out[1] = h * (5.0L * phi[0] + 8.0L * phi[1] - phi[2]) / 12.0L;
        out[2] = h * (phi[0] + 4.0L * phi[1] + phi[2]) / 3.0L;
    }
    for (size_t k = 2; k + 2 < n; k += 2) {
        out[k + 1] = out[k] + h * (5.0L * phi[k] + 8.0L * phi[k + 1] - phi[k + 2]) / 12.0L;
        out[k + 2] = out[k] + h * (phi[k] + 4.0L * phi[k + 1] + phi[k + 2]) / 3.0L;
    }
}

long double hinv(long double x, double p) {
    // Odd extension of x -> x^(1/(p-1)); transient iterates may undershoot 0.
    if (x == 0.0L) return 0.0L;
    long double m = 1.0L / ((long double)p - 1.0L);
    return x > 0 ? std::pow(x, m) : -std::pow(-x, m);
}

}  // namespace

double picard_r_alpha(const ProblemSpec& spec, double m2, double m3) {
    spec.validate();
    if (m2 < 0.0) m2 = spec.v0 / 2.0;
    const double p = spec.p;
    double forcing = spec.f.eval(spec.v0 + m2);
    if (spec.sign == Sign::Plus) forcing += spec.g.eval(m3);
    double b1 = std::pow(p / (p - 1.0), (p - 1.0) / p) * std::pow((double)spec.n, 1.0 / p) *
                std::pow(m2, (p - 1.0) / p) / std::pow(forcing, 1.0 / p);
    double b2 = spec.n * std::pow(m3, p - 1.0) / forcing;
    return std::min({b1, b2, 1.0});
}

PicardGrid picard_iterate(const ProblemSpec& spec, double r_end, int intervals,
                          int max_iter, double tol) {
    if (intervals % 2 != 0) ++intervals;
    const int N = intervals;
    const long double h = (long double)r_end / N;
    const double p = spec.p;
    const double sgn = spec.sign_factor();

    PicardGrid grid;
    grid.r.resize(N + 1);
    for (int i = 0; i <= N; ++i) grid.r[i] = static_cast<double>(h * i);
    grid.v.assign(N + 1, (long double)spec.v0);
    grid.dv.assign(N + 1, 0.0L);

    std::vector<long double> phi(N + 1), J(N + 1), vnew(N + 1), dvnew(N + 1), integ(N + 1);
    const long double scale = std::max(1.0L, (long double)spec.v0);
    for (int it = 0; it < max_iter; ++it) {
        // phi = t^(n-1) (f(v) +- g(|v'|)), then J = cumulative integral.
        // Transient minus-sign iterates can undershoot v = 0; the forcing is
        // clamped there, which does not move the fixed point.
        for (int i = 0; i <= N; ++i) {
            long double forcing =
                spec.f.eval(std::max(grid.v[i], (long double)0.0L)) +
                sgn * spec.g.eval(std::fabs((long double)grid.dv[i]));
            phi[i] = std::pow((long double)grid.r[i], (long double)(spec.n - 1)) * forcing;
        }
        cumulative_simpson(phi, h, J);
        dvnew[0] = 0.0L;
        for (int i = 1; i <= N; ++i) {
            long double inner = J[i] / std::pow((long double)grid.r[i], (long double)(spec.n - 1));
            dvnew[i] = hinv(inner, p);
        }
        cumulative_simpson(dvnew, h, integ);
        for (int i = 0; i <= N; ++i) vnew[i] = (long double)spec.v0 + integ[i];

        long double dist = 0.0L;
        for (int i = 0; i <= N; ++i) {
            dist = std::max(dist, std::fabs(vnew[i] - grid.v[i]));
            dist = std::max(dist, std::fabs(dvnew[i] - grid.dv[i]));
        }
        grid.v = vnew;
        grid.dv = dvnew;
        grid.iterations = it + 1;
        if (dist < (long double)tol * scale) return grid;
    }
    throw NoConvergenceError("picard_iterate: C1 distance not below tolerance after " +
                             std::to_string(max_iter) + " iterations");
}

RadialTrajectory picard_solve(const ProblemSpec& spec, double r1, const PicardOptions& opt) {
    spec.validate();
    if (!(r1 > 0.0)) throw PreconditionError("picard_solve: needs r1 > 0");
    double ralpha = picard_r_alpha(spec, opt.m2, opt.m3);
    if (r1 > ralpha)
        throw PreconditionError("picard_solve: r1=" + std::to_string(r1) +
                                " beyond containment radius " + std::to_string(ralpha));

    PicardGrid grid = picard_iterate(spec, r1, opt.intervals, opt.max_iter, opt.tol);

    RadialTrajectory traj;
    traj.nodes.reserve(grid.r.size() - 1);
    for (size_t i = 1; i < grid.r.size(); ++i)
        traj.nodes.push_back({grid.r[i], grid.v[i], grid.dv[i], 0.0, 0.0});
    traj.termination.kind = TerminationKind::ReachedRmax;
    traj.termination.r_last = r1;
    PrimitiveCache F(spec.f);
    fill_diagnostics(traj, spec, F);
    return traj;
}

}  // namespace kograd
