#pragma once

#include "kograd/growth.hpp"

namespace kograd {

/// Sign of the gradient term on the right-hand side.
enum class Sign { Plus, Minus };

const char* to_string(Sign s);

/// A full problem instance for the radial equation
///
///     (r^(n-1) (v')^(p-1))' = r^(n-1) (f(v) +- g(v')),  v(0)=v0 > 0, v'(0)=0.
struct ProblemSpec {
    double p = 2.0;
    int n = 3;
    Sign sign = Sign::Plus;
    GrowthExpr f = GrowthExpr::power(1.0, 1.0);
    GrowthExpr g = GrowthExpr::power(1.0, 1.0);
    double v0 = 1.0;
    /// Permits a zero g (classical test mode, no gradient term) and a zero f
    /// (used only by residual checks of closed-form solutions).
    bool test_mode = false;

    double sign_factor() const { return sign == Sign::Plus ? 1.0 : -1.0; }

    /// Throws std::invalid_argument when an invariant fails.
    void validate() const;
};

}  // namespace kograd
