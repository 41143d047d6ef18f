#include "kograd/improper.hpp"

#include <array>
#include <cmath>

#include "kograd/errors.hpp"
#include "kograd/quadrature.hpp"

namespace kograd {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Diverges: return "Diverges";
        case Verdict::Converges: return "Converges";
        default: return "Inconclusive";
    }
}

const char* to_string(Method m) {
    return m == Method::Symbolic ? "Symbolic" : "NumericTrend";
}

Verdict verdict_from_signature(const TailSignature& sig) {
    const double eps = 1e-12;
    if (sig.alpha > -1.0 + eps) return Verdict::Diverges;
    if (sig.alpha < -1.0 - eps) return Verdict::Converges;
    return sig.beta >= -1.0 - eps ? Verdict::Diverges : Verdict::Converges;
}

namespace {

// Least-squares fit of log phi = c0 + alpha log s + beta log log s.
// Returns false when too few positive samples are available.
bool fit_tail_model(const std::vector<double>& s, const std::vector<double>& phi,
                    double& alpha, double& beta) {
    double m[3][3] = {};
    double rhs[3] = {};
    int used = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!(phi[i] > 0.0) || !std::isfinite(phi[i])) continue;
        double x1 = std::log(s[i]);
        double x2 = std::log(x1);
        double y = std::log(phi[i]);
        double row[3] = {1.0, x1, x2};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
            rhs[a] += row[a] * y;
        }
        ++used;
    }
    if (used < 6) return false;
    // Solve the 3x3 normal equations by Gaussian elimination.
    double aug[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
        aug[a][3] = rhs[a];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(aug[r][col]) > std::fabs(aug[piv][col])) piv = r;
        if (std::fabs(aug[piv][col]) < 1e-14) return false;
        for (int b = 0; b < 4; ++b) std::swap(aug[col][b], aug[piv][b]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double fac = aug[r][col] / aug[col][col];
            for (int b = 0; b < 4; ++b) aug[r][b] -= fac * aug[col][b];
        }
    }
    alpha = aug[1][3] / aug[1][1];
    beta = aug[2][3] / aug[2][2];
    return true;
}

// Fit log(s * phi) = c + beta log log s, i.e. the alpha = -1 log-factor model.
bool fit_log_model(const std::vector<double>& s, const std::vector<double>& phi,
                   double& beta) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!(phi[i] > 0.0) || !std::isfinite(phi[i])) continue;
        double x = std::log(std::log(s[i]));
        double y = std::log(s[i] * phi[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 4) return false;
    double den = used * sxx - sx * sx;
    if (std::fabs(den) < 1e-14) return false;
    beta = (used * sxy - sx * sy) / den;
    return true;
}

}  // namespace

ConvergenceVerdict classify_improper(const IntegrandSpec& phi, double lower,
                                     const ImproperOptions& opt) {
    if (phi.signature && !opt.force_numeric) {
        ConvergenceVerdict out;
        out.method = Method::Symbolic;
        out.signature = phi.signature;
        out.verdict = verdict_from_signature(*phi.signature);
        return out;
    }

    const std::array<double, 4> cutoffs = {1e3, 1e5, 1e7, 1e9};
    NumericEvidence ev;
    ev.cutoffs.assign(cutoffs.begin(), cutoffs.end());

    // Partial integrals, accumulated in u = log s.
    auto in_u = [&phi](double u) {
        double s = std::exp(u);
        return phi.eval(s) * s;
    };
    double acc = 0.0;
    double from = std::max(lower, 1e-6);
    for (double cut : cutoffs) {
        if (cut > from) {
            acc += quad(in_u, std::log(from), std::log(cut), opt.quad_tol);
            from = cut;
        }
        ev.partials.push_back(acc);
    }

    // Tail samples for the model fit.
    std::vector<double> sgrid, vals;
    const int npts = 33;
    for (int i = 0; i < npts; ++i) {
        double s = std::pow(10.0, 3.0 + 6.0 * i / (npts - 1));
        double v = phi.eval(s);
        if (!std::isfinite(v)) v = -1.0;  // flagged; skipped by the fits
        sgrid.push_back(s);
        vals.push_back(v);
    }

    ConvergenceVerdict out;
    out.method = Method::NumericTrend;

    int positive = 0;
    for (double v : vals)
        if (v > 0.0) ++positive;
    if (positive < 6) {
        // The integrand underflowed to zero across the tail: decays faster
        // than any power, hence converges.
        out.verdict = Verdict::Converges;
        ev.alpha_fit = -INFINITY;
        out.numeric = std::move(ev);
        return out;
    }

    double alpha = 0.0, beta = 0.0;
    if (!fit_tail_model(sgrid, vals, alpha, beta)) {
        out.verdict = Verdict::Inconclusive;
        out.numeric = std::move(ev);
        return out;
    }
    ev.alpha_fit = alpha;
    ev.beta_fit = beta;

    if (alpha >= -1.0 + opt.alpha_band) {
        // Guard demanded of a numeric Diverges: partial sums strictly increase
        // and their increments do not collapse.
        bool increasing = true;
        double prev_inc = -1.0;
        bool no_decay = true;
        for (size_t i = 1; i < ev.partials.size(); ++i) {
            double inc = ev.partials[i] - ev.partials[i - 1];
            if (inc <= 0.0) increasing = false;
            if (prev_inc > 0.0 && inc < 0.05 * prev_inc) no_decay = false;
            prev_inc = inc;
        }
        out.verdict = (increasing && no_decay) ? Verdict::Diverges : Verdict::Inconclusive;
        out.numeric = std::move(ev);
        return out;
    }
    if (alpha <= -1.0 - opt.alpha_band) {
        out.verdict = Verdict::Converges;
        out.numeric = std::move(ev);
        return out;
    }

    // Inside the indecision band around alpha = -1: try the log-factor model.
    double beta_fixed = 0.0;
    if (fit_log_model(sgrid, vals, beta_fixed)) {
        ev.used_log_model = true;
        ev.beta_fit = beta_fixed;
        if (beta_fixed >= -1.0 + opt.beta_band)
            out.verdict = Verdict::Diverges;
        else if (beta_fixed <= -1.0 - opt.beta_band)
            out.verdict = Verdict::Converges;
        else
            out.verdict = Verdict::Inconclusive;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    out.numeric = std::move(ev);
    return out;
}

}  // namespace kograd
