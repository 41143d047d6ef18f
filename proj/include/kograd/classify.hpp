#pragma once

#include <string>
#include <vector>

#include "kograd/conditions.hpp"
#include "kograd/march.hpp"
#include "kograd/problem.hpp"

namespace kograd {

enum class Outcome { Existence, Nonexistence, Inconclusive };

const char* to_string(Outcome o);

/// An integral-condition verdict tagged with the condition it tests.
struct NamedVerdict {
    std::string condition;
    ConvergenceVerdict verdict;
};

/// Decision of the classifier: the outcome, the single clause that produced
/// it, qualifying caveats, and every report the decision rests on.
struct Classification {
    Outcome outcome = Outcome::Inconclusive;
    std::string clause;
    std::vector<std::string> caveats;
    std::vector<NamedVerdict> integral_reports;
    std::vector<GrowthConditionReport> growth_reports;
};

struct ClassifyOptions {
    ConditionOptions conditions;
};

/// Theorem-driven decision tree.
///
/// Plus sign: either blow-up integral converging => Nonexistence; both
/// diverging and (growth cap holds, or the p-matched ratio condition holds)
/// => Existence; anything else => Inconclusive.
/// Minus sign: Gamma condition converging => Nonexistence; either existence
/// integral diverging => Existence; else Inconclusive.
/// An outcome is never derived from an Inconclusive verdict.
Classification classify(const ProblemSpec& spec, const ClassifyOptions& opt = {});

/// Closed-form exponent arithmetic for f = t^m, g = t^q.
Classification power_case(double m, double q, double p, Sign sign);

/// ODE cross-check of a non-Inconclusive classification: plus-sign
/// Nonexistence must blow up at finite radius for every v0; Existence (both
/// signs) must reach r_max cleanly. Minus-sign Nonexistence has no radial
/// criterion and is reported as unchecked.
struct CrossValidationRow {
    double v0 = 0.0;
    TerminationKind termination = TerminationKind::ReachedRmax;
    double R_est = 0.0;
    bool consistent = false;
};

struct ConsistencyReport {
    bool checked = false;
    bool all_consistent = true;
    std::string note;
    std::vector<CrossValidationRow> rows;
};

ConsistencyReport cross_validate(const ProblemSpec& spec, const Classification& cls,
                                 const std::vector<double>& v0_set, double r_max = 1e3,
                                 const MarchControls& controls = {});

}  // namespace kograd
