// Test-side oracles, independent of the library's numeric paths.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Composite Simpson at a fixed resolution; the independent quadrature check.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Hand equivalent of the Bertrand tail rule for s^alpha (log s)^beta.
inline bool bertrand_diverges(double alpha, double beta) {
    if (alpha > -1.0 + 1e-12) return true;
    if (alpha < -1.0 - 1e-12) return false;
    return beta >= -1.0 - 1e-12;
}

inline std::vector<double> geom_grid(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    return out;
}

inline std::vector<double> linear_grid(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * double(i) / (count - 1));
    return out;
}

}  // namespace oracles
