#include "kograd/primitive.hpp"

#include <cmath>

#include "kograd/quadrature.hpp"

namespace kograd {

namespace {

bool all_pure_powers(const GrowthExpr& f) {
    if (!f.is_analytic()) return false;
    for (const auto& term : f.terms())
        if (term.logexp != 0.0) return false;
    return true;
}

double closed_primitive(const GrowthExpr& f, double s) {
    double sum = 0.0;
    for (const auto& term : f.terms())
        sum += term.coeff * std::pow(s, term.power + 1.0) / (term.power + 1.0);
    return sum;
}

}  // namespace

double primitive(const GrowthExpr& f, double s, double tol) {
    if (!(s >= 0.0)) throw std::domain_error("primitive: needs s >= 0");
    if (s == 0.0 || f.is_zero()) return 0.0;
    if (all_pure_powers(f)) return closed_primitive(f, s);
    auto fn = [&f](double t) { return f.eval(t); };
    return quad(fn, 0.0, s, tol);
}

PrimitiveCache::PrimitiveCache(GrowthExpr fn, double tol)
    : fn_(std::move(fn)), tol_(tol), closed_form_(all_pure_powers(fn_)) {}

double PrimitiveCache::anchor(int k) const { return std::ldexp(1.0, j0_ + k); }

double PrimitiveCache::operator()(double s) const {
    if (!(s >= 0.0)) throw std::domain_error("PrimitiveCache: needs s >= 0");
    if (s == 0.0 || fn_.is_zero()) return 0.0;
    if (closed_form_) return closed_primitive(fn_, s);

    // f is increasing, so a finite f(s) keeps the whole range finite.
    double fs = fn_.eval(s);
    if (!std::isfinite(fs)) return INFINITY;

    auto integrand = [this](double t) { return fn_.eval(t); };
    if (s <= anchor(0)) return quad(integrand, 0.0, s, tol_);

    int k = static_cast<int>(std::floor(std::log2(s))) - j0_;
    if (k < 0) k = 0;
    double base;
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (prefix_.empty()) prefix_.push_back(quad(integrand, 0.0, anchor(0), tol_));
        while (static_cast<int>(prefix_.size()) <= k) {
            int j = static_cast<int>(prefix_.size());
            prefix_.push_back(prefix_[j - 1] + quad(integrand, anchor(j - 1), anchor(j), tol_));
        }
        base = prefix_[k];
    }
    return base + quad(integrand, anchor(k), s, tol_);
}

}  // namespace kograd
