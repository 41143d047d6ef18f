#include "kograd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kograd/errors.hpp"

namespace kograd {

std::string format_number(double x) {
    if (std::isnan(x)) return "null";
    // JSON has no Infinity; saturate at a parseable sentinel.
    if (std::isinf(x)) return x > 0 ? "1e308" : "-1e308";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_number(long double x) {
    if (x != x) return "null";
    if (!std::isfinite(x)) return x > 0 ? "1e308" : "-1e308";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string array_of(const std::vector<double>& xs) {
    std::string out = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_number(xs[i]);
    }
    return out + "]";
}

std::string array_of_strings(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += quote(xs[i]);
    }
    return out + "]";
}

GrowthExpr growth_from_json(const nlohmann::json& j, const char* which) {
    if (!j.contains("terms") || !j["terms"].is_array())
        throw std::invalid_argument(std::string(which) + ": expected {\"terms\": [...]}");
    std::vector<GrowthTerm> terms;
    for (const auto& t : j["terms"]) {
        GrowthTerm term;
        term.coeff = t.value("c", 1.0);
        term.power = t.value("a", 1.0);
        term.logexp = t.value("b", 0.0);
        terms.push_back(term);
    }
    if (terms.empty()) return GrowthExpr::zero();
    return GrowthExpr::analytic(std::move(terms));
}

std::string growth_to_json(const GrowthExpr& e) {
    std::string out = "{\"terms\":[";
    if (e.is_analytic()) {
        const auto& terms = e.terms();
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i) out += ",";
            out += "{\"c\":" + format_number(terms[i].coeff) +
                   ",\"a\":" + format_number(terms[i].power) +
                   ",\"b\":" + format_number(terms[i].logexp) + "}";
        }
    }
    return out + "]}";
}

}  // namespace

ProblemSpec parse_problem_json(const std::string& text, bool allow_test_mode) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("problem file: invalid JSON: ") + e.what());
    }
    ProblemSpec spec;
    try {
        spec.p = j.at("p").get<double>();
        spec.n = j.at("n").get<int>();
        std::string sign = j.at("sign").get<std::string>();
        if (sign == "plus" || sign == "+")
            spec.sign = Sign::Plus;
        else if (sign == "minus" || sign == "-")
            spec.sign = Sign::Minus;
        else
            throw std::invalid_argument("sign must be \"plus\" or \"minus\"");
        spec.v0 = j.value("v0", 1.0);
        spec.f = growth_from_json(j.at("f"), "f");
        spec.g = growth_from_json(j.at("g"), "g");
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
    spec.test_mode = allow_test_mode;
    spec.validate();
    return spec;
}

ProblemSpec parse_problem_file(const std::string& path, bool allow_test_mode) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_json(ss.str(), allow_test_mode);
}

std::string problem_to_json(const ProblemSpec& spec) {
    std::string out = "{";
    out += "\"p\":" + format_number(spec.p);
    out += ",\"n\":" + std::to_string(spec.n);
    out += ",\"sign\":" + quote(to_string(spec.sign));
    out += ",\"v0\":" + format_number(spec.v0);
    out += ",\"f\":" + growth_to_json(spec.f);
    out += ",\"g\":" + growth_to_json(spec.g);
    return out + "}";
}

std::string verdict_to_json(const std::string& condition, const ConvergenceVerdict& v) {
    std::string out = "{";
    out += "\"condition\":" + quote(condition);
    out += ",\"verdict\":" + quote(to_string(v.verdict));
    out += ",\"method\":" + quote(to_string(v.method));
    out += ",\"evidence\":{";
    if (v.signature)
        out += "\"alpha\":" + format_number(v.signature->alpha) +
               ",\"beta\":" + format_number(v.signature->beta);
    if (v.numeric) {
        if (v.signature) out += ",";
        out += "\"cutoffs\":" + array_of(v.numeric->cutoffs);
        out += ",\"partials\":" + array_of(v.numeric->partials);
        out += ",\"alpha_fit\":" + format_number(v.numeric->alpha_fit);
        out += ",\"beta_fit\":" + format_number(v.numeric->beta_fit);
        out += ",\"used_log_model\":" + std::string(v.numeric->used_log_model ? "true" : "false");
    }
    return out + "}}";
}

std::string growth_report_to_json(const GrowthConditionReport& rep) {
    std::string out = "{";
    out += "\"condition\":" + quote(to_string(rep.kind));
    out += ",\"verdict\":" + quote(to_string(rep.verdict));
    out += ",\"method\":" + quote(to_string(rep.method));
    out += ",\"evidence\":{";
    out += "\"threshold\":" + format_number(rep.threshold);
    out += ",\"eps0\":" + format_number(rep.eps0);
    out += ",\"A_values\":" + array_of(rep.A_values);
    out += ",\"estimated_limits\":" + array_of(rep.estimated_limits);
    return out + "}}";
}

std::string classification_to_json(const Classification& cls,
                                   const ConsistencyReport* consistency) {
    std::string out = "{";
    out += "\"outcome\":" + quote(to_string(cls.outcome));
    out += ",\"clause\":" + quote(cls.clause);
    out += ",\"caveats\":" + array_of_strings(cls.caveats);
    out += ",\"reports\":[";
    bool first = true;
    for (const auto& nv : cls.integral_reports) {
        if (!first) out += ",";
        first = false;
        out += verdict_to_json(nv.condition, nv.verdict);
    }
    for (const auto& gr : cls.growth_reports) {
        if (!first) out += ",";
        first = false;
        out += growth_report_to_json(gr);
    }
    out += "]";
    if (consistency) {
        out += ",\"cross_validation\":{";
        out += "\"checked\":" + std::string(consistency->checked ? "true" : "false");
        out += ",\"all_consistent\":" +
               std::string(consistency->all_consistent ? "true" : "false");
        out += ",\"note\":" + quote(consistency->note);
        out += ",\"runs\":[";
        for (size_t i = 0; i < consistency->rows.size(); ++i) {
            const auto& row = consistency->rows[i];
            if (i) out += ",";
            out += "{\"v0\":" + format_number(row.v0);
            out += ",\"termination\":" + quote(to_string(row.termination));
            if (row.termination == TerminationKind::BlowUp)
                out += ",\"R_est\":" + format_number(row.R_est);
            out += ",\"consistent\":" + std::string(row.consistent ? "true" : "false") + "}";
        }
        out += "]}";
    }
    return out + "}";
}

std::string trajectory_to_csv(const RadialTrajectory& traj) {
    std::string out = "r,v,dv,A,W\n";
    for (const auto& n : traj.nodes) {
        out += format_number(n.r);
        out += ",";
        out += format_number(n.v);
        out += ",";
        out += format_number(n.dv);
        out += ",";
        out += std::isnan(n.A) ? "nan" : format_number(n.A);
        out += ",";
        out += std::isnan(n.W) ? "nan" : format_number(n.W);
        out += "\n";
    }
    return out;
}

std::string solve_summary_json(const RadialTrajectory& traj, const TrajectoryResidual& res) {
    const auto& t = traj.termination;
    std::string out = "{";
    out += "\"termination\":" + quote(to_string(t.kind));
    out += ",\"r_last\":" + format_number(t.r_last);
    if (t.kind == TerminationKind::BlowUp) {
        out += ",\"R_est\":" + format_number(t.R_est);
        out += ",\"R_uncertainty\":" + format_number(t.R_uncertainty);
        out += ",\"v_bounded\":" + std::string(t.v_bounded ? "true" : "false");
    }
    out += ",\"v_last\":" + format_number(traj.nodes.back().v);
    out += ",\"dv_last\":" + format_number(traj.nodes.back().dv);
    out += ",\"nodes\":" + std::to_string(traj.nodes.size());
    out += ",\"worst_residual\":" + format_number(res.max_scaled);
    out += ",\"warnings\":" + array_of_strings(traj.warnings);
    return out + "}";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool with_radius) {
    std::string out = with_radius ? "p,m,q,sign,outcome,clause,R_est\n"
                                  : "p,m,q,sign,outcome,clause\n";
    for (const auto& row : rows) {
        out += format_number(row.p) + "," + format_number(row.m) + "," +
               format_number(row.q) + "," + to_string(row.sign) + "," + row.outcome + "," +
               row.clause;
        if (with_radius) {
            out += ",";
            if (row.R_est) out += format_number(*row.R_est);
        }
        out += "\n";
    }
    return out;
}

std::vector<SweepRow> parse_sweep_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open grid file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("grid file: invalid JSON: ") + e.what());
    }

    auto parse_sign = [](const std::string& s) {
        if (s == "plus" || s == "+") return Sign::Plus;
        if (s == "minus" || s == "-") return Sign::Minus;
        throw std::invalid_argument("grid file: sign must be plus or minus");
    };

    std::vector<SweepRow> rows;
    if (j.contains("rows")) {
        for (const auto& r : j["rows"]) {
            SweepRow row;
            row.p = r.at("p").get<double>();
            row.m = r.at("m").get<double>();
            row.q = r.at("q").get<double>();
            row.sign = parse_sign(r.at("sign").get<std::string>());
            rows.push_back(row);
        }
        return rows;
    }
    if (j.contains("p") && j.contains("m") && j.contains("q") && j.contains("sign")) {
        for (const auto& pv : j["p"])
            for (const auto& mv : j["m"])
                for (const auto& qv : j["q"])
                    for (const auto& sv : j["sign"]) {
                        SweepRow row;
                        row.p = pv.get<double>();
                        row.m = mv.get<double>();
                        row.q = qv.get<double>();
                        row.sign = parse_sign(sv.get<std::string>());
                        rows.push_back(row);
                    }
        return rows;
    }
    throw std::invalid_argument("grid file: expected \"rows\" or p/m/q/sign ranges");
}

std::string supersolution_table_csv(const Supersolution& ss) {
    std::string out = "t,phi,phi_slope_abs,r_in_ball\n";
    const auto& psi = ss.psi_table();
    const auto& ts = ss.t_table();
    const double pexp = ss.derived().p() / (ss.derived().p() - 1.0);
    const double Rp = std::pow(ss.R(), pexp);
    for (size_t i = 0; i < psi.size(); ++i) {
        double slope = ss.derived().Gamma_inv(ss.derived().F(psi[i]));
        out += format_number(ts[i]) + "," + format_number(psi[i]) + "," +
               format_number(slope) + ",";
        if (ts[i] <= Rp) out += format_number(std::pow(Rp - ts[i], 1.0 / pexp));
        out += "\n";
    }
    return out;
}

std::string supersolution_report_json(const Supersolution& ss, const SupersolutionCheck& chk,
                                      double roundtrip_error) {
    std::string out = "{";
    out += "\"R\":" + format_number(ss.R());
    out += ",\"vbar0\":" + format_number(ss.vbar0());
    out += ",\"t_range\":[" + format_number(ss.t_smallest()) + "," +
           format_number(ss.t_largest()) + "]";
    out += ",\"window_t_hi\":" + format_number(chk.window_t_hi);
    out += ",\"min_slack\":" + format_number(chk.min_slack);
    out += ",\"nodes_checked\":" + std::to_string(chk.nodes_checked);
    out += ",\"roundtrip_error\":" + format_number(roundtrip_error);
    out += ",\"warnings\":" + array_of_strings(ss.warnings());
    return out + "}";
}

}  // namespace kograd
