#include "kograd/derived.hpp"

#include <cmath>
#include <stdexcept>

#include "kograd/monotone.hpp"

namespace kograd {

DerivedFunctions::DerivedFunctions(GrowthExpr f, GrowthExpr g, double p, int n)
    : f_(std::move(f)), g_(std::move(g)), p_(p), n_(n) {
    if (!(p > 1.0)) throw std::invalid_argument("DerivedFunctions: needs p > 1");
    if (n < 1) throw std::invalid_argument("DerivedFunctions: needs n >= 1");
    c_ = std::pow(p_ / (p_ - 1.0), p_) * n_;
    Fcache_ = std::make_shared<PrimitiveCache>(f_);
    Gcache_ = std::make_shared<PrimitiveCache>(g_);
}

double DerivedFunctions::Gamma(double s) const {
    if (!(s >= 0.0)) throw std::domain_error("Gamma: needs s >= 0");
    return g_primitive(2.0 * s) + (p_ - 1.0) / p_ * c_ * std::pow(s, p_);
}

namespace {
InvertOptions wide_bracket() {
    InvertOptions opt;
    opt.bracket_cap = 1e250;
    opt.max_iter = 500;
    return opt;
}
}  // namespace

double DerivedFunctions::g_inv(double y) const {
    return invert_monotone([this](double t) { return g_.eval(t); }, y, 0.0, 1.0,
                           wide_bracket());
}

double DerivedFunctions::Gamma_inv(double y) const {
    return invert_monotone([this](double s) { return Gamma(s); }, y, 0.0, 1.0,
                           wide_bracket());
}

}  // namespace kograd
