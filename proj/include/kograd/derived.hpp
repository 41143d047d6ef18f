#pragma once

#include <memory>

#include "kograd/growth.hpp"
#include "kograd/primitive.hpp"

namespace kograd {

/// The derived functions consumed by the integral conditions: the primitive F
/// of f, the inverse of g, and the Gamma transform
///
///     Gamma(s) = integral of g over [0, 2s] + ((p-1)/p) * c * s^p,
///     c = (p/(p-1))^p * n,
///
/// together with its inverse. Immutable and safe to share across threads.
class DerivedFunctions {
public:
    DerivedFunctions(GrowthExpr f, GrowthExpr g, double p, int n);

    const GrowthExpr& f() const { return f_; }
    const GrowthExpr& g() const { return g_; }
    double p() const { return p_; }
    int n() const { return n_; }
    double gamma_constant() const { return c_; }

    double F(double s) const { return (*Fcache_)(s); }
    double g_primitive(double s) const { return (*Gcache_)(s); }

    double Gamma(double s) const;

    /// Inverse of g on its range. Throws RangeError beyond the bracket cap
    /// (widened internally well past the generic default: the supersolution
    /// profile composes these inverses with very large primitives).
    double g_inv(double y) const;

    /// Inverse of Gamma. Throws RangeError beyond the bracket cap.
    double Gamma_inv(double y) const;

private:
    GrowthExpr f_;
    GrowthExpr g_;
    double p_;
    int n_;
    double c_;
    std::shared_ptr<PrimitiveCache> Fcache_;
    std::shared_ptr<PrimitiveCache> Gcache_;
};

}  // namespace kograd
