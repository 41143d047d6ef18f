#include "kograd/cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "kograd/errors.hpp"
#include "kograd/io.hpp"

namespace kograd {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitStepCollapse = 4;
constexpr int kExitConditionNotMet = 5;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write output file: " + path);
    out << content;
}

struct CommonOpts {
    std::string problem_path;
    std::string out_path;
    std::string format = "json";
    double tol = 0.0;  // 0: defaults
    bool test_mode = false;
};

int cmd_check(const CommonOpts& o) {
    ProblemSpec spec = parse_problem_file(o.problem_path, o.test_mode);
    ConditionOptions copt;
    if (o.tol > 0.0) copt.improper.quad_tol = o.tol;

    std::vector<std::pair<std::string, ConvergenceVerdict>> verdicts;
    verdicts.emplace_back("ko_f", ko_f(spec.f, spec.p, copt));
    verdicts.emplace_back("ko_g", ko_g(spec.g, spec.p, copt));
    verdicts.emplace_back("v_bounded", v_bounded_at_blowup(spec.g, spec.p, copt));
    verdicts.emplace_back("sobolev_energy", sobolev_exclusion(spec.g, spec.p, copt));
    verdicts.emplace_back("gamma_inv_integral",
                          gamma_condition(spec.f, spec.g, spec.p, spec.n, copt));
    auto pm = pminus_existence(spec.f, spec.g, spec.p, copt);
    verdicts.emplace_back("grad_inverse_integral", pm.second);

    std::vector<GrowthConditionReport> growth;
    if (spec.p <= 2.0)
        growth.push_back(growth_ratio(spec.f, spec.g, spec.p,
                                      GrowthConditionKind::RatioLiminf, copt));
    if (spec.p >= 2.0)
        growth.push_back(growth_ratio(spec.f, spec.g, spec.p,
                                      GrowthConditionKind::RatioLimsup, copt));
    growth.push_back(growth_cap(spec.g, spec.p, copt));

    std::string out;
    if (o.format == "csv") {
        out = "condition,verdict,method\n";
        for (const auto& [name, v] : verdicts)
            out += name + "," + to_string(v.verdict) + "," + to_string(v.method) + "\n";
        for (const auto& g : growth)
            out += std::string(to_string(g.kind)) + "," + to_string(g.verdict) + "," +
                   to_string(g.method) + "\n";
    } else {
        out = "{\"problem\":" + problem_to_json(spec);
        out += ",\"flags\":{\"g_lipschitz_at_zero\":";
        out += (spec.g.is_analytic() && !spec.g.is_zero() && !spec.g.lipschitz_at_zero())
                   ? "false"
                   : "true";
        out += "},\"conditions\":[";
        bool first = true;
        for (const auto& [name, v] : verdicts) {
            if (!first) out += ",";
            first = false;
            out += verdict_to_json(name, v);
        }
        for (const auto& g : growth) {
            if (!first) out += ",";
            first = false;
            out += growth_report_to_json(g);
        }
        out += "]}\n";
    }
    write_output(o.out_path, out);
    return kExitOk;
}

int cmd_solve(const CommonOpts& o, double r_max, const std::string& summary_path) {
    ProblemSpec spec = parse_problem_file(o.problem_path, o.test_mode);
    if (!(r_max > 0.0)) throw std::invalid_argument("solve: needs --rmax > 0");
    MarchControls controls;
    if (o.tol > 0.0) {
        controls.rel_tol = o.tol;
        controls.abs_tol = o.tol * 1e-2;
    }
    RadialTrajectory traj = march(spec, r_max, controls);
    TrajectoryResidual res = residual_trajectory(traj, spec);
    write_output(o.out_path, trajectory_to_csv(traj));
    write_output(summary_path, solve_summary_json(traj, res) + "\n");
    return traj.termination.kind == TerminationKind::StepCollapse ? kExitStepCollapse
                                                                  : kExitOk;
}

int cmd_classify(const CommonOpts& o, bool cross, double r_max,
                 const std::vector<double>& v0_set) {
    if (cross && !(r_max > 0.0))
        throw std::invalid_argument("classify: needs --rmax > 0 for cross-validation");
    ProblemSpec spec = parse_problem_file(o.problem_path, o.test_mode);
    ClassifyOptions copt;
    if (o.tol > 0.0) copt.conditions.improper.quad_tol = o.tol;
    Classification cls = classify(spec, copt);

    std::string out;
    if (o.format == "csv") {
        out = "outcome,clause\n" + std::string(to_string(cls.outcome)) + "," + cls.clause +
              "\n";
    } else if (cross && cls.outcome != Outcome::Inconclusive) {
        MarchControls controls;
        controls.rel_tol = 1e-8;
        controls.abs_tol = 1e-10;
        ConsistencyReport rep = cross_validate(spec, cls, v0_set, r_max, controls);
        out = classification_to_json(cls, &rep) + "\n";
    } else {
        out = classification_to_json(cls) + "\n";
    }
    write_output(o.out_path, out);
    return kExitOk;
}

int cmd_supersolution(const CommonOpts& o, double radius, const std::string& report_path) {
    ProblemSpec spec = parse_problem_file(o.problem_path, o.test_mode);
    if (spec.sign != Sign::Minus)
        throw std::invalid_argument("supersolution: the problem must have sign \"minus\"");
    double cap = std::pow((spec.p - 1.0) / spec.p, spec.p - 1.0);
    double R = radius > 0.0 ? radius : cap;
    if (R > cap) {
        std::cerr << "warning: radius " << R << " clamped to ((p-1)/p)^(p-1) = " << cap
                  << "\n";
        R = cap;
    }
    double tol = o.tol > 0.0 ? o.tol : 1e-10;
    Supersolution ss = build_supersolution(spec.f, spec.g, spec.p, spec.n, R, tol);
    SupersolutionCheck chk = verify_supersolution(ss, spec.f, spec.g);

    // Round-trip error of the implicit definition over the tabulated range.
    double roundtrip = 0.0;
    for (int i = 1; i <= 5; ++i) {
        double t = ss.t_smallest() *
                   std::pow(ss.t_largest() / ss.t_smallest(), i / 6.0);
        double back = ss.t_of(ss.phi(t));
        roundtrip = std::max(roundtrip, std::fabs(back - t) / std::max(t, 1e-300));
    }

    write_output(o.out_path, supersolution_table_csv(ss));
    write_output(report_path, supersolution_report_json(ss, chk, roundtrip) + "\n");
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::string& grid_path, int jobs, bool cross,
              double r_max) {
    if (cross && !(r_max > 0.0))
        throw std::invalid_argument("sweep: needs --rmax > 0 for cross-validation");
    std::vector<SweepRow> rows = parse_sweep_grid_file(grid_path);
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            SweepRow& row = rows[i];
            Classification cls = power_case(row.m, row.q, row.p, row.sign);
            row.outcome = to_string(cls.outcome);
            row.clause = cls.clause;
            if (cross && cls.outcome == Outcome::Nonexistence && row.sign == Sign::Plus) {
                ProblemSpec spec;
                spec.p = row.p;
                spec.n = 3;
                spec.sign = row.sign;
                spec.f = GrowthExpr::power(1.0, row.m);
                spec.g = GrowthExpr::power(1.0, row.q);
                spec.v0 = 1.0;
                MarchControls controls;
                controls.rel_tol = 1e-8;
                controls.abs_tol = 1e-10;
                RadialTrajectory traj = march(spec, r_max, controls);
                if (traj.termination.kind == TerminationKind::BlowUp)
                    row.R_est = traj.termination.R_est;
            }
        }
    };
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    write_output(o.out_path, sweep_to_csv(rows, cross));
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "kograd: existence/nonexistence of entire radial solutions of "
        "p-Laplacian problems with gradient terms, via integral growth "
        "conditions cross-checked against direct ODE integration"};
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 success; 2 malformed input; 3 numeric failure; "
        "4 step collapse without blow-up; 5 supersolution condition not met.");

    CommonOpts common;
    double solve_rmax = 10.0;
    double classify_rmax = 1e3;
    double sweep_rmax = 50.0;
    double radius = -1.0;
    std::string summary_path, report_path, grid_path;
    std::vector<double> v0_set = {0.5, 1.0, 2.0};
    bool cross = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub, bool needs_problem) {
        if (needs_problem)
            sub->add_option("--problem", common.problem_path, "Problem spec JSON file")
                ->required();
        sub->add_option("--out", common.out_path, "Output path (default: stdout)");
        sub->add_option("--format", common.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol", common.tol, "Numeric tolerance override")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--test-mode-zero-g", common.test_mode,
                      "Accept a zero g (classical problem, no gradient term)");
    };

    auto* check = app.add_subcommand("check", "Evaluate every integral/growth condition");
    add_common(check, true);

    auto* solve = app.add_subcommand("solve", "Integrate the radial IVP and export the trajectory");
    add_common(solve, true);
    solve->add_option("--rmax", solve_rmax, "Integration endpoint")->required();
    solve->add_option("--summary-out", summary_path, "Summary JSON path (default: stdout)");

    auto* cls = app.add_subcommand("classify", "Combine conditions into a classification");
    add_common(cls, true);
    cls->add_flag("--cross-validate", cross, "Also run the ODE consistency suite");
    cls->add_option("--rmax", classify_rmax, "Cross-validation integration endpoint");
    cls->add_option("--v0-set", v0_set, "Cross-validation initial values");

    auto* super = app.add_subcommand("supersolution",
                                     "Build and verify the minus-sign comparison profile");
    add_common(super, true);
    super->add_option("--radius", radius, "Ball radius (default ((p-1)/p)^(p-1), clamped)");
    super->add_option("--report-out", report_path, "Verification report path");

    auto* sweep = app.add_subcommand("sweep", "Classify a grid of power-law problems");
    add_common(sweep, false);
    sweep->add_option("--grid", grid_path, "Grid JSON file")->required();
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_flag("--cross-validate", cross, "Record blow-up radii for plus-sign rows");
    sweep->add_option("--rmax", sweep_rmax, "Cross-validation integration endpoint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (check->parsed()) return cmd_check(common);
        if (solve->parsed()) return cmd_solve(common, solve_rmax, summary_path);
        if (cls->parsed()) return cmd_classify(common, cross, classify_rmax, v0_set);
        if (super->parsed()) return cmd_supersolution(common, radius, report_path);
        if (sweep->parsed()) return cmd_sweep(common, grid_path, jobs, cross, sweep_rmax);
    } catch (const ConditionNotMetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConditionNotMet;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitBadInput;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.push_back("kograd");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : full) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace kograd
