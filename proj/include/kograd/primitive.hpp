#pragma once

#include <mutex>
#include <vector>

#include "kograd/growth.hpp"

namespace kograd {

/// F(s) = integral of f over [0, s] for a GrowthExpr f.
///
/// Uses the analytic antiderivative when every term is a pure power; otherwise
/// evaluates by adaptive quadrature. Prefer PrimitiveCache when F is queried
/// many times on the same expression.
double primitive(const GrowthExpr& f, double s, double tol = 1e-11);

/// Cached primitive of a GrowthExpr.
///
/// Prefix integrals are accumulated once per power-of-two cell [2^k, 2^{k+1}]
/// and a query pays one partial-cell quadrature, so every value carries full
/// quadrature accuracy. The cell table grows lazily under a mutex; concurrent
/// readers observe a consistent table.
class PrimitiveCache {
public:
    explicit PrimitiveCache(GrowthExpr fn, double tol = 1e-12);

    double operator()(double s) const;

    const GrowthExpr& fn() const { return fn_; }

private:
    double anchor(int k) const;

    GrowthExpr fn_;
    double tol_;
    bool closed_form_;
    int j0_ = -40;  // first anchor at 2^j0
    mutable std::mutex mu_;
    mutable std::vector<double> prefix_;  // prefix_[k] = F(anchor(k))
};

}  // namespace kograd
