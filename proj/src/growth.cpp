#include "kograd/growth.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kograd/errors.hpp"

namespace kograd {

namespace {

// Sampled strict-monotonicity check on a log grid spanning (0, 1e6].
void check_monotone_sampled(const GrowthExpr& e) {
    double prev = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double t = std::pow(10.0, -6.0 + 12.0 * i / 64.0);
        double val = e.eval(t);
        if (!std::isfinite(val) || val <= prev)
            throw std::invalid_argument("GrowthExpr: not strictly increasing near t=" +
                                        std::to_string(t) + " (" + e.describe() + ")");
        prev = val;
    }
}

}  // namespace

GrowthExpr GrowthExpr::analytic(std::vector<GrowthTerm> terms) {
    for (const auto& term : terms) {
        if (!(term.coeff > 0.0) || !std::isfinite(term.coeff))
            throw std::invalid_argument("GrowthExpr: coefficients must be positive");
        if (!(term.power >= 0.0) || !std::isfinite(term.power) || !std::isfinite(term.logexp))
            throw std::invalid_argument("GrowthExpr: powers must be finite and >= 0");
        if (term.power == 0.0 && term.logexp == 0.0)
            throw std::invalid_argument("GrowthExpr: constant terms are not allowed");
    }
    GrowthExpr e;
    e.analytic_ = true;
    e.terms_ = std::move(terms);
    if (!e.terms_.empty()) check_monotone_sampled(e);
    return e;
}

GrowthExpr GrowthExpr::power(double coeff, double a) {
    return analytic({GrowthTerm{coeff, a, 0.0}});
}

GrowthExpr GrowthExpr::power_log(double coeff, double a, double b) {
    return analytic({GrowthTerm{coeff, a, b}});
}

GrowthExpr GrowthExpr::opaque(std::function<double(double)> fn, std::string label) {
    GrowthExpr e;
    e.analytic_ = false;
    e.opaque_ = std::move(fn);
    e.label_ = std::move(label);
    return e;
}

GrowthExpr GrowthExpr::zero() {
    GrowthExpr e;
    e.analytic_ = true;
    return e;
}

template <class Real>
Real GrowthExpr::eval_impl(Real t) const {
    if (t < Real(0)) throw std::domain_error("GrowthExpr: negative argument");
    if (t == Real(0)) return Real(0);
    if (!analytic_) return Real(opaque_(static_cast<double>(t)));
    Real sum = 0;
    Real lg = Real(-1);
    for (const auto& term : terms_) {
        Real v = Real(term.coeff);
        if (term.power != 0.0) v *= std::pow(t, Real(term.power));
        if (term.logexp != 0.0) {
            if (lg < Real(0)) lg = std::log(Real(M_E) + t);
            v *= std::pow(lg, Real(term.logexp));
        }
        sum += v;
    }
    return sum;
}

double GrowthExpr::eval(double t) const { return eval_impl<double>(t); }
long double GrowthExpr::eval(long double t) const { return eval_impl<long double>(t); }

template <class Real>
Real GrowthExpr::derivative_impl(Real t) const {
    if (!(t > Real(0))) throw std::domain_error("GrowthExpr::derivative: needs t > 0");
    if (!analytic_) {
        double td = static_cast<double>(t);
        double h = 1e-5 * td;
        return Real((opaque_(td + h) - opaque_(td - h)) / (2.0 * h));
    }
    Real sum = 0;
    Real lg = std::log(Real(M_E) + t);
    for (const auto& term : terms_) {
        // d/dt [c t^a L^b] = c t^(a-1) L^(b-1) (a L + b t/(e+t)), L = log(e+t)
        Real base = Real(term.coeff);
        if (term.power != 0.0) base *= std::pow(t, Real(term.power) - 1);
        else base /= t;
        if (term.logexp != 0.0) base *= std::pow(lg, Real(term.logexp) - 1);
        else base /= lg;
        sum += base * (Real(term.power) * lg + Real(term.logexp) * t / (Real(M_E) + t));
    }
    return sum;
}

double GrowthExpr::derivative(double t) const { return derivative_impl<double>(t); }
long double GrowthExpr::derivative(long double t) const { return derivative_impl<long double>(t); }

const std::vector<GrowthTerm>& GrowthExpr::terms() const {
    if (!analytic_) throw UnsupportedError("GrowthExpr: opaque evaluator has no term list");
    return terms_;
}

std::pair<double, double> GrowthExpr::asymptotic_signature() const {
    if (!analytic_) throw UnsupportedError("asymptotic_signature: opaque evaluator");
    if (terms_.empty()) throw UnsupportedError("asymptotic_signature: zero expression");
    std::pair<double, double> best{terms_[0].power, terms_[0].logexp};
    for (const auto& term : terms_) {
        std::pair<double, double> sig{term.power, term.logexp};
        if (sig > best) best = sig;
    }
    return best;
}

double GrowthExpr::leading_coeff() const {
    auto sig = asymptotic_signature();
    double c = 0.0;
    for (const auto& term : terms_)
        if (term.power == sig.first && term.logexp == sig.second) c += term.coeff;
    return c;
}

double GrowthExpr::min_power() const {
    if (!analytic_ || terms_.empty())
        throw UnsupportedError("min_power: needs a nonempty analytic sum");
    double m = terms_[0].power;
    for (const auto& term : terms_) m = std::min(m, term.power);
    return m;
}

bool GrowthExpr::lipschitz_at_zero() const {
    if (!analytic_ || terms_.empty()) return true;
    return min_power() >= 1.0;
}

std::string GrowthExpr::describe() const {
    if (!analytic_) return label_;
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& term : terms_) {
        if (!first) os << " + ";
        first = false;
        if (term.coeff != 1.0) os << term.coeff << "*";
        os << "t^" << term.power;
        if (term.logexp != 0.0) os << "*log(e+t)^" << term.logexp;
    }
    return os.str();
}

}  // namespace kograd
