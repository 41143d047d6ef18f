#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kograd/classify.hpp"
#include "kograd/problem.hpp"
#include "kograd/residual.hpp"
#include "kograd/supersolution.hpp"
#include "kograd/trajectory.hpp"

namespace kograd {

/// Fixed float formatting for machine-readable output: 12 significant digits,
/// so identical runs produce byte-identical files.
std::string format_number(double x);
std::string format_number(long double x);

/// Parses the problem JSON schema
///   {"p":2,"n":3,"sign":"plus","v0":1,"f":{"terms":[{"c":1,"a":3,"b":0}]},
///    "g":{"terms":[...]}}
/// Throws std::invalid_argument on malformed input. Zero-term f or g is
/// accepted only when allow_test_mode is set.
ProblemSpec parse_problem_json(const std::string& text, bool allow_test_mode = false);
ProblemSpec parse_problem_file(const std::string& path, bool allow_test_mode = false);

std::string problem_to_json(const ProblemSpec& spec);

/// Condition report entry {condition, verdict, method, evidence}.
std::string verdict_to_json(const std::string& condition, const ConvergenceVerdict& v);
std::string growth_report_to_json(const GrowthConditionReport& rep);

std::string classification_to_json(const Classification& cls,
                                   const ConsistencyReport* consistency = nullptr);

std::string trajectory_to_csv(const RadialTrajectory& traj);
std::string solve_summary_json(const RadialTrajectory& traj, const TrajectoryResidual& res);

/// One sweep tuple and its classification.
struct SweepRow {
    double p = 2.0;
    double m = 1.0;
    double q = 1.0;
    Sign sign = Sign::Plus;
    std::string outcome;
    std::string clause;
    std::optional<double> R_est;  // from cross-validation, when requested
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool with_radius);

/// Sweep grid file: either {"rows":[{"p":..,"m":..,"q":..,"sign":".."},...]}
/// or ranges {"p":[...],"m":[...],"q":[...],"sign":["plus","minus"]} whose
/// cartesian product is taken in input order.
std::vector<SweepRow> parse_sweep_grid_file(const std::string& path);

std::string supersolution_table_csv(const Supersolution& ss);
std::string supersolution_report_json(const Supersolution& ss, const SupersolutionCheck& chk,
                                      double roundtrip_error);

}  // namespace kograd
