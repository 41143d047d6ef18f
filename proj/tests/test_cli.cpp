#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kograd/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("kograd_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) {
        fs::path p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
    std::string file(const std::string& name) { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kPlainProblem = R"({"p":2,"n":3,"sign":"plus","v0":1,
  "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[{"c":1,"a":1,"b":0}]}})";

}  // namespace

TEST_CASE("check emits one verdict per condition") {
    TempDir dir;
    auto problem = dir.file("p.json", kPlainProblem);
    auto out = dir.file("check.json");
    REQUIRE(kograd::run_cli({"check", "--problem", problem, "--out", out}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["flags"]["g_lipschitz_at_zero"] == true);
    bool saw_kof = false, saw_cap = false;
    for (const auto& c : j["conditions"]) {
        if (c["condition"] == "ko_f") {
            saw_kof = true;
            CHECK(c["verdict"] == "Diverges");
        }
        if (c["condition"] == "growth_cap") {
            saw_cap = true;
            CHECK(c["verdict"] == "Holds");
        }
    }
    CHECK(saw_kof);
    CHECK(saw_cap);
    // p = 2: both ratio conditions plus 6 integral conditions plus the cap.
    CHECK(j["conditions"].size() == 9);
}

TEST_CASE("check reports the gradient boundary case q = p") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[{"c":1,"a":2,"b":0}]}})");
    auto out = dir.file("check.json");
    REQUIRE(kograd::run_cli({"check", "--problem", problem, "--out", out}) == 0);
    json j = json::parse(slurp(out));
    for (const auto& c : j["conditions"]) {
        if (c["condition"] == "ko_g") CHECK(c["verdict"] == "Converges");
        if (c["condition"] == "v_bounded") CHECK(c["verdict"] == "Diverges");
    }
}

TEST_CASE("check in csv format") {
    TempDir dir;
    auto problem = dir.file("p.json", kPlainProblem);
    auto out = dir.file("check.csv");
    REQUIRE(kograd::run_cli({"check", "--problem", problem, "--format", "csv", "--out",
                             out}) == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("condition,verdict,method\n", 0) == 0);
    CHECK(csv.find("ko_f,Diverges,Symbolic") != std::string::npos);
    CHECK(csv.find("growth_cap,Holds,Symbolic") != std::string::npos);
}

TEST_CASE("missing problem file exits 2") {
    CHECK(kograd::run_cli({"check", "--problem", "/nonexistent/x.json"}) == 2);
}

TEST_CASE("malformed problem file exits 2") {
    TempDir dir;
    auto problem = dir.file("bad.json", "{not json");
    CHECK(kograd::run_cli({"check", "--problem", problem}) == 2);
    auto nogrowth = dir.file("bad2.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[]},"g":{"terms":[]}})");
    CHECK(kograd::run_cli({"check", "--problem", nogrowth}) == 2);
}

TEST_CASE("solve writes a trajectory and a summary") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":3,"b":0}]},"g":{"terms":[{"c":1,"a":2,"b":0}]}})");
    auto traj = dir.file("traj.csv");
    auto summary = dir.file("summary.json");
    REQUIRE(kograd::run_cli({"solve", "--problem", problem, "--rmax", "20", "--out", traj,
                             "--summary-out", summary}) == 0);
    json j = json::parse(slurp(summary));
    CHECK(j["termination"] == "BlowUp");
    CHECK(j["v_bounded"] == false);
    // The scaled residual is dominated by the steep pole approach here.
    CHECK(j["worst_residual"].get<double>() < 0.05);
    std::string csv = slurp(traj);
    CHECK(csv.rfind("r,v,dv,A,W\n", 0) == 0);
}

TEST_CASE("solve in zero-g test mode matches the linear oracle") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[]}})");
    auto traj = dir.file("traj.csv");
    auto summary = dir.file("summary.json");
    REQUIRE(kograd::run_cli({"solve", "--problem", problem, "--rmax", "2",
                             "--test-mode-zero-g", "--out", traj, "--summary-out",
                             summary}) == 0);
    // At the node closest to r = 1 the value must match sinh(r)/r there.
    std::istringstream csv(slurp(traj));
    std::string line;
    std::getline(csv, line);  // header
    double best_r = -1, best_v = 0;
    while (std::getline(csv, line)) {
        double r, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &r, &v) == 2)
            if (std::fabs(r - 1.0) < std::fabs(best_r - 1.0)) best_r = r, best_v = v;
    }
    REQUIRE(best_r > 0.9);
    CHECK(std::fabs(best_v - std::sinh(best_r) / best_r) < 1e-6);
    // Zero g without the flag is rejected.
    CHECK(kograd::run_cli({"solve", "--problem", problem, "--rmax", "2"}) == 2);
}

TEST_CASE("solve rejects rmax = 0") {
    TempDir dir;
    auto problem = dir.file("p.json", kPlainProblem);
    CHECK(kograd::run_cli({"solve", "--problem", problem, "--rmax", "0"}) == 2);
}

TEST_CASE("classify emits outcome and clause") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":3,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[{"c":1,"a":4,"b":0}]}})");
    auto out = dir.file("cls.json");
    REQUIRE(kograd::run_cli({"classify", "--problem", problem, "--out", out}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["outcome"] == "Nonexistence");
    CHECK(j["clause"] == "plus.nonexistence.ko_g");
    CHECK(j["reports"].is_array());
}

TEST_CASE("classify with cross validation embeds the run report") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":3,"b":0}]},"g":{"terms":[{"c":1,"a":2,"b":0}]}})");
    auto out = dir.file("cls.json");
    REQUIRE(kograd::run_cli({"classify", "--problem", problem, "--cross-validate", "--rmax",
                             "30", "--out", out}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["cross_validation"]["checked"] == true);
    CHECK(j["cross_validation"]["all_consistent"] == true);
    CHECK(j["cross_validation"]["runs"].size() == 3);
}

TEST_CASE("supersolution subcommand") {
    TempDir dir;
    auto good = dir.file("good.json", R"({"p":2,"n":3,"sign":"minus","v0":1,
      "f":{"terms":[{"c":1,"a":5,"b":0}]},"g":{"terms":[{"c":1,"a":2,"b":0}]}})");
    auto table = dir.file("phi.csv");
    auto report = dir.file("report.json");
    REQUIRE(kograd::run_cli({"supersolution", "--problem", good, "--out", table,
                             "--report-out", report}) == 0);
    json j = json::parse(slurp(report));
    CHECK(j["min_slack"].get<double>() >= 0.0);
    CHECK(j["roundtrip_error"].get<double>() <= 1e-8);
    CHECK(slurp(table).rfind("t,phi", 0) == 0);

    // Oversized radius is clamped with a warning, still exit 0.
    REQUIRE(kograd::run_cli({"supersolution", "--problem", good, "--radius", "0.9", "--out",
                             table, "--report-out", report}) == 0);
    json j2 = json::parse(slurp(report));
    CHECK(j2["R"].get<double>() <= 0.5 + 1e-12);

    auto bad = dir.file("bad.json", R"({"p":2,"n":3,"sign":"minus","v0":1,
      "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[{"c":1,"a":1,"b":0}]}})");
    CHECK(kograd::run_cli({"supersolution", "--problem", bad, "--out", table,
                           "--report-out", report}) == 5);

    auto wrong_sign = dir.file("plus.json", kPlainProblem);
    CHECK(kograd::run_cli({"supersolution", "--problem", wrong_sign}) == 2);
}

TEST_CASE("sweep: empty grid, ordering, and parallel determinism") {
    TempDir dir;
    auto empty = dir.file("empty.json", R"({"rows":[]})");
    auto out = dir.file("sweep.csv");
    REQUIRE(kograd::run_cli({"sweep", "--grid", empty, "--out", out}) == 0);
    CHECK(slurp(out) == "p,m,q,sign,outcome,clause\n");

    std::string grid = R"({"p":[1.5,2,3],"m":[0.3,1,2.5],"q":[0.3,1,2.5],
                           "sign":["plus","minus"]})";
    auto gridfile = dir.file("grid.json", grid);
    auto out1 = dir.file("sweep1.csv");
    auto out4 = dir.file("sweep4.csv");
    REQUIRE(kograd::run_cli({"sweep", "--grid", gridfile, "--jobs", "1", "--out", out1}) == 0);
    REQUIRE(kograd::run_cli({"sweep", "--grid", gridfile, "--jobs", "4", "--out", out4}) == 0);
    CHECK(slurp(out1) == slurp(out4));

    // Supercritical gradient rows are all Nonexistence for the plus sign.
    std::istringstream csv(slurp(out1));
    std::string line;
    std::getline(csv, line);
    int checked = 0;
    while (std::getline(csv, line)) {
        double p, m, q;
        char rest[128];
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%127s", &p, &m, &q, rest) == 4) {
            std::string tail(rest);
            if (tail.rfind("plus,", 0) == 0 && q > p - 1.0 + 1e-9) {
                CHECK(tail.find("Nonexistence") != std::string::npos);
                ++checked;
            }
        }
    }
    CHECK(checked > 5);
}

TEST_CASE("check and classify handle the zero-g test mode") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2,"n":3,"sign":"plus","v0":1,
      "f":{"terms":[{"c":1,"a":1,"b":0}]},"g":{"terms":[]}})");
    auto out = dir.file("check.json");
    REQUIRE(kograd::run_cli({"check", "--problem", problem, "--test-mode-zero-g", "--out",
                             out}) == 0);
    json j = json::parse(slurp(out));
    for (const auto& c : j["conditions"]) {
        if (c["condition"] == "ko_g") CHECK(c["verdict"] == "Diverges");
        if (c["condition"] == "growth_cap") CHECK(c["verdict"] == "Holds");
    }
    auto cls = dir.file("cls.json");
    REQUIRE(kograd::run_cli({"classify", "--problem", problem, "--test-mode-zero-g",
                             "--out", cls}) == 0);
    json jc = json::parse(slurp(cls));
    // Classical gradient-free classification: subcritical f gives existence.
    CHECK(jc["outcome"] == "Existence");
}

TEST_CASE("help exits zero") {
    CHECK(kograd::run_cli({"--help"}) == 0);
    CHECK(kograd::run_cli({"solve", "--help"}) == 0);
    CHECK(kograd::run_cli({}) == 2);
    CHECK(kograd::run_cli({"frobnicate"}) == 2);
}

TEST_CASE("deterministic byte-identical solve output") {
    TempDir dir;
    auto problem = dir.file("p.json", R"({"p":2.5,"n":3,"sign":"minus","v0":1,
      "f":{"terms":[{"c":1,"a":1.2,"b":0}]},"g":{"terms":[{"c":1,"a":2.2,"b":1}]}})");
    auto t1 = dir.file("t1.csv");
    auto t2 = dir.file("t2.csv");
    auto s1 = dir.file("s1.json");
    auto s2 = dir.file("s2.json");
    REQUIRE(kograd::run_cli({"solve", "--problem", problem, "--rmax", "3", "--out", t1,
                             "--summary-out", s1}) == 0);
    REQUIRE(kograd::run_cli({"solve", "--problem", problem, "--rmax", "3", "--out", t2,
                             "--summary-out", s2}) == 0);
    CHECK(slurp(t1) == slurp(t2));
    CHECK(slurp(s1) == slurp(s2));
}

TEST_CASE("deterministic byte-identical classify output") {
    TempDir dir;
    auto problem = dir.file("p.json", kPlainProblem);
    auto out1 = dir.file("a.json");
    auto out2 = dir.file("b.json");
    REQUIRE(kograd::run_cli({"classify", "--problem", problem, "--out", out1}) == 0);
    REQUIRE(kograd::run_cli({"classify", "--problem", problem, "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
}
