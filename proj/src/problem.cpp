#include "kograd/problem.hpp"

#include <stdexcept>

namespace kograd {

const char* to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

void ProblemSpec::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("ProblemSpec: needs p > 1");
    if (n < 1) throw std::invalid_argument("ProblemSpec: needs n >= 1");
    if (!(v0 > 0.0)) throw std::invalid_argument("ProblemSpec: needs v0 > 0");
    if (f.is_zero() && !test_mode)
        throw std::invalid_argument("ProblemSpec: zero f requires test mode");
    if (g.is_zero() && !test_mode)
        throw std::invalid_argument("ProblemSpec: zero g requires test mode");
    if (f.is_zero() && g.is_zero())
        throw std::invalid_argument("ProblemSpec: f and g cannot both vanish");
}

}  // namespace kograd
