#include "kograd/monotone.hpp"

#include <cmath>
#include <string>

#include "kograd/errors.hpp"

namespace kograd {

double invert_monotone(const std::function<double(double)>& h, double y,
                       double lo_hint, double hi_hint, const InvertOptions& opt) {
    const double tol = opt.abs_tol + opt.rel_tol * std::max(1.0, std::fabs(y));

    double lo = std::max(0.0, lo_hint);
    double flo = h(lo);
    if (y < flo - tol)
        throw RangeError("invert_monotone: y=" + std::to_string(y) + " below h(" +
                         std::to_string(lo) + ")=" + std::to_string(flo));
    if (std::fabs(flo - y) <= tol) return lo;

    double hi = std::max(lo, hi_hint);
    if (hi == lo) hi = lo + 1.0;
    double fhi = h(hi);
    while (fhi < y) {
        if (hi >= opt.bracket_cap)
            throw RangeError("invert_monotone: y=" + std::to_string(y) +
                             " unreachable below bracket cap");
        lo = hi;
        flo = fhi;
        hi = std::min(opt.bracket_cap, hi * 2.0);
        fhi = h(hi);
    }

    for (int it = 0; it < opt.max_iter; ++it) {
        // Secant candidate, replaced by the midpoint when degenerate or
        // landing outside the open bracket.
        double mid;
        if (fhi > flo) {
            mid = lo + (y - flo) * (hi - lo) / (fhi - flo);
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        double fmid = h(mid);
        if (std::fabs(fmid - y) <= tol) return mid;
        if (fmid < y) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        if (hi - lo <= opt.abs_tol * 0.5 + opt.rel_tol * std::fabs(mid))
            return 0.5 * (lo + hi);
        // Alternate with a plain bisection step so a stagnating secant cannot
        // stall the bracket.
        if (it % 2 == 1) {
            double bis = 0.5 * (lo + hi);
            double fbis = h(bis);
            if (std::fabs(fbis - y) <= tol) return bis;
            if (fbis < y) {
                lo = bis;
                flo = fbis;
            } else {
                hi = bis;
                fhi = fbis;
            }
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace kograd
