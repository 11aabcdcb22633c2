#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltlab/csv.hpp"
#include "ltlab/experiments.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/timechange.hpp"

using namespace ltlab;
namespace ex = ltlab::experiments;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("ltlab_test_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("valid config with comments and defaults") {
        const auto config = ex::parse_config_text(
            "# run the ramp checks\n"
            "experiment = deterministic_ramp\n"
            "seed = 7   # fixed\n"
            "steps = 2048\n");
        CHECK(config.experiment == "deterministic_ramp");
        CHECK(config.seed == 7);
        CHECK(config.steps == 2048);
        CHECK(config.horizon == 1.0);  // default preserved
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(ex::parse_config_text("experiment = deterministic_ramp\nbogus = 1\n"),
                        ex::ConfigError);
    }
    SUBCASE("unknown experiment is rejected") {
        CHECK_THROWS_AS(ex::parse_config_text("experiment = not_an_experiment\n"),
                        ex::ConfigError);
    }
    SUBCASE("malformed lines and duplicates are rejected") {
        CHECK_THROWS_AS(ex::parse_config_text("experiment deterministic_ramp\n"),
                        ex::ConfigError);
        CHECK_THROWS_AS(
            ex::parse_config_text("experiment = deterministic_ramp\nseed = 1\nseed = 2\n"),
            ex::ConfigError);
    }
    SUBCASE("numeric validation happens before any work") {
        CHECK_THROWS_AS(ex::parse_config_text("experiment = deterministic_ramp\nsteps = 0\n"),
                        ex::ConfigError);
        CHECK_THROWS_AS(
            ex::parse_config_text("experiment = deterministic_ramp\nhorizon = -1\n"),
            ex::ConfigError);
        CHECK_THROWS_AS(
            ex::parse_config_text("experiment = deterministic_ramp\nreplicates = 0\n"),
            ex::ConfigError);
        CHECK_THROWS_AS(
            ex::parse_config_text("experiment = deterministic_ramp\nsteps = twelve\n"),
            ex::ConfigError);
    }
    SUBCASE("level-grid keys are parsed and validated") {
        const auto config = ex::parse_config_text(
            "experiment = deterministic_ramp\nx_min = 0.1\nx_max = 0.9\nx_step = 0.1\n");
        CHECK(config.x_min == 0.1);
        CHECK(config.x_step == 0.1);
        CHECK_THROWS_AS(ex::parse_config_text("experiment = deterministic_ramp\n"
                                              "x_min = 1\nx_max = 0\nx_step = 0.1\n"),
                        ex::ConfigError);
    }
}

TEST_CASE("registry lists every acceptance experiment") {
    const auto& infos = ex::registry();
    for (const char* required :
         {"localtime_maximum", "joint_identity", "abs_w_factor2", "ito_tanaka_square",
          "occupation_density", "regulated_unit", "timechange_standardize",
          "deterministic_ramp", "expected_localtime", "skorohod_minimality"}) {
        CHECK(ex::find_experiment(required) != nullptr);
        bool seen = false;
        for (const auto& info : infos) seen = seen || info.name == required;
        CHECK(seen);
    }
    CHECK(ex::find_experiment("does_not_exist") == nullptr);
}

TEST_CASE("invalid configs never create artifacts") {
    TempDir dir("invalid");
    ex::ExperimentConfig config;
    config.experiment = "deterministic_ramp";
    config.steps = 0;
    CHECK_THROWS_AS(ex::run_and_write(config, dir.path), ex::ConfigError);
    CHECK(!fs::exists(dir.path));
}

TEST_CASE("deterministic ramp experiment writes byte-identical artifacts") {
    TempDir dir_a("run_a");
    TempDir dir_b("run_b");
    ex::ExperimentConfig config = ex::find_experiment("deterministic_ramp")->defaults;
    CHECK(ex::run_and_write(config, dir_a.path) == 0);
    CHECK(ex::run_and_write(config, dir_b.path) == 0);

    for (const char* file : {"summary.txt", "checks.csv", "config_echo.txt", "ramp_band.csv",
                             "ramp_field.csv"}) {
        INFO(file);
        REQUIRE(fs::exists(dir_a.path / file));
        CHECK(slurp(dir_a.path / file) == slurp(dir_b.path / file));
    }
    const std::string summary = slurp(dir_a.path / "summary.txt");
    CHECK(summary.find("pass = 1") != std::string::npos);
    const std::string echo = slurp(dir_a.path / "config_echo.txt");
    CHECK(echo.find("experiment = deterministic_ramp") != std::string::npos);
    CHECK(echo.find("seed = 42") != std::string::npos);
}

TEST_CASE("coefficient registry") {
    CHECK(ex::coefficient("zero", 5.0)(3.0) == 0.0);
    CHECK(ex::coefficient("constant", 2.5)(3.0) == 2.5);
    CHECK(ex::coefficient("linear", -1.0)(3.0) == -3.0);
    CHECK_THROWS_AS(ex::coefficient("cubic", 1.0), ex::ConfigError);
}

TEST_CASE("csv wire formats") {
    SUBCASE("doubles round-trip through 17 significant digits") {
        const double v = 0.1 + 0.2;
        CHECK(std::stod(csv::format(v)) == v);
        CHECK(std::stod(csv::format(1.0 / 3.0)) == 1.0 / 3.0);
    }
    SUBCASE("path with driver increments") {
        const paths::SimulationConfig config{3, 1, TimeGrid(1.0, 4)};
        const auto path = paths::simulate_wiener_path(config, 0);
        std::ostringstream out;
        csv::write_path(out, path);
        std::istringstream in(out.str());
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,value,dW");
        std::string row, last;
        std::getline(in, row);
        CHECK(row.substr(0, 4) == "0,0,");
        int rows = 1;
        last = row;
        while (std::getline(in, row))
            if (!row.empty()) {
                ++rows;
                last = row;
            }
        CHECK(rows == 5);
        // terminal row carries no increment column value
        CHECK(last.back() == ',');
        // values round-trip
        const std::string text = out.str();
        CHECK(text.find(csv::format(path.terminal())) != std::string::npos);
    }
    SUBCASE("path without driver omits the dW column") {
        const TimeGrid grid(1.0, 2);
        Eigen::ArrayXd v(3);
        v << 0.0, 0.5, 1.0;
        std::ostringstream out;
        csv::write_path(out, SamplePath(grid, v));
        CHECK(out.str().substr(0, 8) == "t,value\n");
    }
    SUBCASE("histogram and time-change headers") {
        Eigen::ArrayXd edges(3), mass(2);
        edges << 0.0, 1.0, 2.0;
        mass << 0.25, 0.75;
        std::ostringstream hist;
        csv::write_histogram(hist, edges, mass);
        CHECK(hist.str() == "bin_left,bin_right,mass\n0,1,0.25\n1,2,0.75\n");

        const paths::SimulationConfig config{4, 1, TimeGrid(1.0, 8)};
        const auto w = paths::simulate_wiener_path(config, 0);
        const auto map = timechange::build_time_change(w, {[](double) { return 1.0; }});
        std::ostringstream tc;
        csv::write_time_change(tc, map);
        std::istringstream in(tc.str());
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,C_t");
    }
}
