#include <doctest.h>

#include "geophase/errors.hpp"
#include "geophase/plot.hpp"
#include "geophase/scenario.hpp"
#include "geophase/sweep.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

using namespace geophase;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams generic() {
    ModelParams p;
    p.omega1 = 1.0;
    p.nu = 0.8;
    p.lambda = 0.5;
    p.coupling_J = 0.3;
    p.omega2 = 0.7;
    return p;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("geophase_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GEOPHASE_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no geophase::Error thrown");
    return ErrorKind::NumericalFailure;
}

} // namespace

TEST_CASE("axes and quantities") {
    CHECK(canonical_axis("n") == "n_photon");
    CHECK(canonical_axis("n'") == "n_prime");
    CHECK(canonical_axis("J") == "coupling_J");
    CHECK(canonical_axis("theta") == "theta");
    CHECK(kind_of([] { canonical_axis("mass"); }) == ErrorKind::InvalidInput);

    ModelParams p;
    double theta = 0.0;
    apply_axis(p, theta, "n", 3.0);
    CHECK(p.n_photon == 3);
    apply_axis(p, theta, "theta", 1.5);
    CHECK(theta == 1.5);
    CHECK(kind_of([&] { apply_axis(p, theta, "n", 1.5); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { apply_axis(p, theta, "n_prime", -1.0); }) == ErrorKind::InvalidInput);

    for (Quantity q : all_quantities()) CHECK(quantity_from_string(to_string(q)) == q);
    CHECK(all_quantities().size() == 6);
    CHECK(kind_of([] { quantity_from_string("entropy"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("linear_range and formatting") {
    const auto r = linear_range(0.0, 5.0, 0.25);
    CHECK(r.size() == 21);
    CHECK(r.back() == doctest::Approx(5.0));
    CHECK(linear_range(1.0, 1.0, 0.5).size() == 1);
    CHECK(kind_of([] { linear_range(1.0, 0.0, 0.5); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { linear_range(0.0, 1.0, 0.0); }) == ErrorKind::InvalidInput);

    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
    CHECK(std::stod(format_double(pi)) == pi);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(result_columns().size() == 33);
    CHECK(result_columns().front() == "omega1");
    CHECK(result_columns().back() == "error");
}

TEST_CASE("sweep settings validation") {
    SweepSpec s;
    s.values = {0.1};
    CHECK_NOTHROW(s.validate());
    s.loop_steps = 8;
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
    s.loop_steps = 64;
    s.levels = {0};
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
    s.levels = {1};
    s.values.clear();
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
    s.values = {std::nan("")};
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
    s.values = {1.0};
    s.workers = 0;
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
    s.workers = 1;
    s.axis = "n";
    s.values = {0.5};
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);
}

TEST_CASE("lambda sweep") {
    SweepSpec s;
    s.base = generic();
    s.axis = "lambda";
    s.values = linear_range(0.0, 5.0, 0.25);
    s.loop_steps = 64;
    const auto rows = run_sweep(s);
    CHECK(rows.size() == 84);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].level == static_cast<int>(i % 4) + 1);
        CHECK(rows[i].params.lambda == doctest::Approx(0.25 * static_cast<double>(i / 4)));
        CHECK(rows[i].error.empty());
        CHECK(rows[i].magnetic_numeric.has_value());
        CHECK_FALSE(rows[i].quantized_numeric.has_value());
    }
    const std::string csv = to_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 85);
}

TEST_CASE("omega2 sweep through zero") {
    SweepSpec s;
    s.base = generic();
    s.axis = "omega2";
    s.values = {-0.5, 0.0, 0.5};
    s.loop_steps = 256;
    for (const auto& row : run_sweep(s)) {
        if (row.params.omega2 == 0.0) {
            REQUIRE(row.magnetic_numeric.has_value());
            CHECK(std::abs(*row.magnetic_numeric) < 1e-8);
        }
    }
}

TEST_CASE("photon-number sweep with quantized driving") {
    SweepSpec s;
    s.base = generic();
    s.axis = "n";
    s.values = {0, 1, 2, 3};
    s.loop_steps = 256;
    s.outputs = {Quantity::Quantized};
    const auto rows = run_sweep(s);
    REQUIRE(rows.size() == 16);
    for (const auto& row : rows) {
        REQUIRE(row.quantized_analytic.has_value());
        const double s2 = std::pow(std::sin(*row.chi / 2), 2);
        CHECK(*row.quantized_analytic == doctest::Approx(2 * pi * (row.params.n_photon + s2)).epsilon(1e-12));
        CHECK_FALSE(row.magnetic_numeric.has_value());
    }
}

TEST_CASE("all outputs and error rows") {
    const auto rows = evaluate_point(generic(), pi / 2, {1, 3}, 64, all_quantities());
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.error.empty());
        CHECK(row.magnetic_numeric.has_value());
        CHECK(row.quantized_numeric.has_value());
        CHECK(row.twomode_numeric.has_value());
        CHECK(row.mixed2_numeric.has_value());
        CHECK(row.mixed2q_numeric.has_value());
        CHECK(row.concurrence.has_value());
        CHECK(format_row(row).size() == result_columns().size());
    }
}

TEST_CASE("degenerate point becomes an error row") {
    ModelParams p;
    p.omega1 = p.nu = p.lambda = p.omega2 = 0.0;
    p.coupling_J = 0.4;
    const auto rows = evaluate_point(p, 0.0, {1, 2, 3, 4}, 64, {Quantity::Magnetic});
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.error == "DegeneracyEncountered");
        CHECK_FALSE(row.magnetic_numeric.has_value());
        CHECK_FALSE(row.energy.has_value());
        const auto cells = format_row(row);
        CHECK(cells.back() == "DegeneracyEncountered");
    }
}

TEST_CASE("sweeps are deterministic") {
    SweepSpec s;
    s.base = generic();
    s.axis = "J";
    s.values = linear_range(-1.0, 1.0, 0.25);
    s.loop_steps = 128;
    s.outputs = {Quantity::Magnetic, Quantity::Mixed2, Quantity::Concurrence};
    const std::string serial = to_csv(run_sweep(s));
    CHECK(serial == to_csv(run_sweep(s)));
    s.workers = 4;
    CHECK(serial == to_csv(run_sweep(s)));
}

TEST_CASE("JSON configuration") {
    const auto doc = nlohmann::json::parse(R"({
        "base": {"omega1": 1.2, "nu": 0.9, "lambda": 0.1, "coupling_J": 0.2, "omega2": 0.3,
                 "n_photon": 1, "n_prime": 2},
        "axis": "theta", "values": [0.5, 1.0], "levels": [2, 4], "loop_steps": 128,
        "theta": 0.3, "outputs": ["twomode", "mixed2q"], "workers": 2})");
    const SweepSpec s = sweep_spec_from_json(doc);
    CHECK(s.base.omega1 == 1.2);
    CHECK(s.base.n_prime == 2);
    CHECK(s.axis == "theta");
    CHECK(s.values == std::vector<double>{0.5, 1.0});
    CHECK(s.levels == std::vector<int>{2, 4});
    CHECK(s.loop_steps == 128);
    CHECK(s.theta == 0.3);
    CHECK(s.workers == 2);
    CHECK(s.outputs == std::set<Quantity>{Quantity::TwoMode, Quantity::Mixed2q});

    const ModelParams p = params_from_json(nlohmann::json::parse(R"({"lambda": 2.0})"), generic());
    CHECK(p.lambda == 2.0);
    CHECK(p.nu == 0.8);

    CHECK(kind_of([] { sweep_spec_from_json(nlohmann::json::parse(R"({"axes": "lambda"})")); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { sweep_spec_from_json(nlohmann::json::parse(R"({"values": "many"})")); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { sweep_spec_from_json(nlohmann::json::parse(R"({"base": {"mass": 1}})")); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { sweep_spec_from_json(nlohmann::json::parse(R"({"outputs": ["heat"]})")); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { sweep_spec_from_json(nlohmann::json::parse("[1, 2]")); }) == ErrorKind::InvalidInput);
}

TEST_CASE("plots") {
    SweepSpec s;
    s.base = generic();
    s.values = linear_range(0.0, 1.0, 0.25);
    s.loop_steps = 64;
    std::istringstream in(to_csv(run_sweep(s)));
    const CsvTable table = read_csv(in);
    CHECK(table.rows.size() == 20);
    CHECK(table.column("lambda") == 2);
    CHECK(table.column("nope") == -1);

    const std::string svg = render_svg(table, "lambda", {"berry_magnetic_numeric"});
    std::size_t lines = 0;
    for (std::size_t at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) ++lines;
    CHECK(lines == 4);
    CHECK(svg.find("lambda") != std::string::npos);
    CHECK(svg.find("rad") != std::string::npos);

    const std::string both = render_svg(table, "lambda", {"berry_magnetic_numeric", "berry_magnetic_analytic"});
    lines = 0;
    for (std::size_t at = both.find("<polyline"); at != std::string::npos; at = both.find("<polyline", at + 1)) ++lines;
    CHECK(lines == 8);

    try {
        render_svg(table, "lambda", {"gamma"});
        FAIL("missing column accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
        CHECK(std::string(e.what()).find("berry_magnetic_numeric") != std::string::npos);
    }
    std::istringstream header_only("lambda,level\n");
    CHECK(kind_of([&] { render_svg(read_csv(header_only), "lambda", {"level"}); }) == ErrorKind::InvalidInput);
    CHECK(column_unit("energy") != "");
    CHECK(column_unit("level") == "");
}

TEST_CASE("scenarios reproduce their claims and rerun identically") {
    const fs::path a = scratch("scen_a"), b = scratch("scen_b");
    for (const auto& name : scenario_names()) {
        const ScenarioResult r = run_scenario(name);
        CHECK_MESSAGE(r.passed(), name);
        CHECK_FALSE(r.checks.empty());
        save_scenario(a, r);
        save_scenario(b, run_scenario(name));
        CHECK(slurp(a / (name + ".csv")) == slurp(b / (name + ".csv")));
        CHECK(!slurp(a / (name + ".csv")).empty());
        std::ostringstream report;
        write_report(report, r);
        CHECK(report.str().find("RESULT " + name + ": PASS") != std::string::npos);
    }
    CHECK(kind_of([] { run_scenario("warp-drive"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch("cli");
    const std::string csv = (dir / "sweep.csv").string();
    CHECK(run_cli("sweep --axis lambda --values 0,0.5,1 --loop-steps 64 --out " + csv) == 0);
    CHECK(fs::exists(csv));
    CHECK(run_cli("plot --csv " + csv + " --x lambda --y berry_magnetic_numeric --out " + (dir / "p.svg").string()) == 0);
    CHECK(fs::exists(dir / "p.svg"));
    CHECK(run_cli("plot --csv " + csv + " --x lambda --y gamma --out " + (dir / "q.svg").string()) == 1);
    {
        std::ofstream empty(dir / "empty.csv");
        empty << "lambda,level\n";
    }
    CHECK(run_cli("plot --csv " + (dir / "empty.csv").string() + " --x lambda --y level") == 1);
    CHECK(run_cli("sweep --axis mass --values 1") == 1);
    CHECK(run_cli("sweep --bogus") == 1);
    CHECK(run_cli("scenario --scenario B-zero --out " + (dir / "scen").string()) == 0);
    CHECK(run_cli("scenario --scenario nowhere") == 1);
    CHECK(run_cli("eig --J 0.4 --omega1 0 --nu 0 --lambda 0 --omega2 0") == 2);
    CHECK(run_cli("berry-magnetic --loop-steps 256") == 0);
}
