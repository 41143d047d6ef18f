#include "kograd/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kograd/conditions.hpp"
#include "kograd/errors.hpp"
#include "kograd/quadrature.hpp"

namespace kograd {

double Supersolution::integrand(double s) const {
    return 1.0 / derived_->Gamma_inv(derived_->F(s));
}

double Supersolution::t_of(double psi) const {
    if (!(psi > 0.0)) throw std::domain_error("Supersolution::t_of: needs psi > 0");
    if (psi > tail_psi_)
        throw RangeError("Supersolution::t_of: psi beyond the tabulated tail cut");
    auto it = std::upper_bound(psi_.begin(), psi_.end(), psi);
    size_t idx = it == psi_.begin() ? 0 : (it - psi_.begin() - 1);
    double base_psi = psi_[idx];
    double t = t_of_psi_[idx];
    auto f = [this](double s) { return integrand(s); };
    if (psi >= base_psi)
        t -= quad(f, base_psi, psi, tol_ * 0.01);
    else
        t += quad(f, psi, base_psi, tol_ * 0.01);
    return t;
}

double Supersolution::phi(double t) const {
    if (!(t > 0.0)) throw std::domain_error("Supersolution::phi: needs t > 0");
    if (t > t_of_psi_.front() || t < t_of_psi_.back())
        throw RangeError("Supersolution::phi: t outside tabulated range [" +
                         std::to_string(t_of_psi_.back()) + ", " +
                         std::to_string(t_of_psi_.front()) + "]");
    // t_of_psi_ is decreasing: locate the bracketing cell.
    size_t lo = 0, hi = t_of_psi_.size() - 1;
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (t_of_psi_[mid] >= t)
            lo = mid;
        else
            hi = mid;
    }
    double psi = 0.5 * (psi_[lo] + psi_[hi]);
    double lo_psi = psi_[lo], hi_psi = psi_[hi];
    // Newton on T(psi) = t with dT/dpsi = -integrand, safeguarded by the cell.
    for (int it = 0; it < 60; ++it) {
        double tcur = t_of(psi);
        double defect = tcur - t;
        if (std::fabs(defect) <= 1e-12 * t) return psi;
        if (defect > 0.0)
            lo_psi = psi;  // t too large -> phi value too small
        else
            hi_psi = psi;
        double step = defect / integrand(psi);
        double next = psi + step;
        psi = (next > lo_psi && next < hi_psi) ? next : 0.5 * (lo_psi + hi_psi);
    }
    return psi;
}

double Supersolution::phi_slope_abs(double t) const {
    double ps = phi(t);
    return derived_->Gamma_inv(derived_->F(ps));
}

double Supersolution::curvature_at_psi(double psi) const {
    double slope = derived_->Gamma_inv(derived_->F(psi));
    double p = derived_->p();
    double denom = 2.0 * derived_->g().eval(2.0 * slope) +
                   (p - 1.0) * derived_->gamma_constant() * std::pow(slope, p - 1.0);
    return derived_->f().eval(psi) * slope / denom;
}

double Supersolution::phi_curvature(double t) const { return curvature_at_psi(phi(t)); }

double Supersolution::vbar(double r) const {
    double pexp = derived_->p() / (derived_->p() - 1.0);
    double t = std::pow(R_, pexp) - std::pow(r, pexp);
    return phi(t);
}

Supersolution build_supersolution(const GrowthExpr& f, const GrowthExpr& g, double p, int n,
                                  double R, double tol) {
    auto gamma = gamma_condition(f, g, p, n);
    if (!gamma.converges())
        throw ConditionNotMetError(
            "build_supersolution: the Gamma condition integral does not converge (verdict " +
            std::string(to_string(gamma.verdict)) + ")");
    double R_cap = std::pow((p - 1.0) / p, p - 1.0);
    if (R > R_cap * (1.0 + 1e-12))
        throw PreconditionError("build_supersolution: R must be <= ((p-1)/p)^(p-1) = " +
                                std::to_string(R_cap));
    if (!(R > 0.0)) throw PreconditionError("build_supersolution: needs R > 0");

    Supersolution ss;
    ss.R_ = R;
    ss.tol_ = tol;
    ss.derived_ = std::make_shared<DerivedFunctions>(f, g, p, n);

    auto integrand = [&ss](double s) { return ss.integrand(s); };

    const double pexp = p / (p - 1.0);
    const double t_needed = std::pow(R, pexp);

    // Tail cut: extend until the local log-log slope certifies a summable
    // tail and the estimated remainder is negligible against the t range the
    // profile has to cover.
    double S = 1e4;
    double tail_value = 0.0;
    bool tail_ok = false;
    for (int tries = 0; tries < 60; ++tries) {
        double fs = integrand(S);
        double fs2 = integrand(S * 1.3);
        double alpha = std::log(fs2 / fs) / std::log(1.3);
        if (alpha < -1.05) {
            tail_value = S * fs / (-alpha - 1.0);
            if (tail_value <= 1e-10 * t_needed) {
                tail_ok = true;
                break;
            }
        }
        S *= 4.0;
        if (S > 1e28) break;
    }
    if (!tail_ok)
        throw TailError("build_supersolution: could not bound the truncation remainder");
    ss.tail_psi_ = S;
    ss.tail_value_ = tail_value;

    // Profile table: geometric psi grid, t accumulated downward from the cut.
    const double ratio = std::pow(2.0, 0.25);
    std::vector<double> psi_desc, t_desc;
    double t_accum = tail_value;
    double psi_hi = S;
    psi_desc.push_back(psi_hi);
    t_desc.push_back(t_accum);
    double psi = psi_hi;
    while (psi > 1e-9) {
        double next = psi / ratio;
        t_accum += quad(integrand, next, psi, tol * 0.01);
        psi = next;
        psi_desc.push_back(psi);
        t_desc.push_back(t_accum);
        if (t_accum > 1.05 * t_needed && psi < 1.0) break;
    }
    if (t_accum <= t_needed) {
        // The defining integral saturates before covering R^(p/(p-1)):
        // shrink the ball so vbar stays inside the table.
        double newR = std::pow(0.95 * t_accum, 1.0 / pexp);
        ss.warnings_.push_back("R reduced from " + std::to_string(R) + " to " +
                               std::to_string(newR) +
                               " to stay inside the profile's range");
        ss.R_ = newR;
    }

    ss.psi_.assign(psi_desc.rbegin(), psi_desc.rend());
    ss.t_of_psi_.assign(t_desc.rbegin(), t_desc.rend());
    ss.vbar0_ = ss.vbar(0.0);
    return ss;
}

SupersolutionCheck verify_supersolution(const Supersolution& ss, const GrowthExpr& f,
                                        const GrowthExpr& g) {
    const auto& derived = ss.derived();
    const double p = derived.p();
    const int n = derived.n();
    const double coef = std::pow(p / (p - 1.0), p - 1.0) * n;

    SupersolutionCheck out;
    const auto& psi = ss.psi_table();
    const auto& ts = ss.t_table();

    // Validity window: from the small-t end (large psi), keep nodes while
    // phi <= |phi'|/2 holds contiguously.
    std::vector<size_t> window;
    for (size_t k = psi.size(); k-- > 0;) {
        double slope = derived.Gamma_inv(derived.F(psi[k]));
        if (psi[k] <= 0.5 * slope)
            window.push_back(k);
        else
            break;
    }
    if (window.empty())
        throw WindowEmptyError("verify_supersolution: no t-window with phi <= |phi'|/2");

    out.window_t_hi = ts[window.back()];
    out.min_slack = INFINITY;
    for (size_t k : window) {
        double ph = psi[k];
        double slope = derived.Gamma_inv(derived.F(ph));
        double curv = derived.f().eval(ph) * slope /
                      (2.0 * derived.g().eval(2.0 * slope) +
                       (p - 1.0) * derived.gamma_constant() * std::pow(slope, p - 1.0));
        double lhs = std::pow(slope, p - 2.0) * curv + coef * std::pow(slope, p - 1.0) +
                     g.eval(slope);
        double slack = f.eval(ph) - lhs;
        out.t_samples.push_back(ts[k]);
        out.slack_samples.push_back(slack);
        out.min_slack = std::min(out.min_slack, slack);
        ++out.nodes_checked;
    }
    return out;
}

ExpInequalityReport exp_inequality_check(double p, const std::vector<double>& x1_grid) {
    ExpInequalityReport rep;
    rep.holds = true;
    for (double x : x1_grid) {
        // For u = exp(x1): Delta_p u = (p-1) e^((p-1)x1), |grad u|^p = e^(p x1).
        double plap = (p - 1.0) * std::exp((p - 1.0) * x);
        double rhs = (p - 1.0) * std::exp((p - 1.0) * x) - std::exp(p * x);
        double defect = plap - rhs;
        double expect = std::exp(p * x);
        // The subtraction cancels against plap, so machine precision is
        // relative to the larger of the two magnitudes involved.
        double rel = std::fabs(defect - expect) / std::max(expect, plap);
        rep.max_rel_defect = std::max(rep.max_rel_defect, rel);
        if (!(defect >= 0.0) || rel > 64.0 * std::numeric_limits<double>::epsilon())
            rep.holds = false;
    }
    return rep;
}

}  // namespace kograd
