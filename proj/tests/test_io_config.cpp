#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "gpeoct/config.hpp"
#include "gpeoct/io.hpp"
#include "gpeoct/presets.hpp"
#include "gpeoct/units.hpp"
#include "support/testutil.hpp"

using namespace gpeoct;
namespace fs = std::filesystem;

namespace {
std::string temp_dir() {
    const fs::path p = fs::temp_directory_path() / "gpeoct_io_test";
    fs::create_directories(p);
    return p.string();
}
} // namespace

TEST_CASE("field files round-trip") {
    const std::string dir = temp_dir();
    testutil::SplitMix64 rng(5);

    std::vector<double> real(60);
    for (auto& v : real) v = rng.uniform(-5, 5);
    io::write_field(dir + "/r.gpf", {5, 12}, real);
    const auto rf = io::read_field(dir + "/r.gpf");
    CHECK(rf.kind == io::ValueKind::real_f64);
    REQUIRE(rf.dims == std::vector<uint32_t>{5, 12});
    CHECK(rf.real_values == real);

    std::vector<cplx> cval(31);
    for (auto& v : cval) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    io::write_field(dir + "/c.gpf", {31}, cval);
    const auto cf = io::read_field(dir + "/c.gpf");
    CHECK(cf.kind == io::ValueKind::complex_f64);
    CHECK(cf.complex_values == cval);

    io::write_axes(io::axes_path_for(dir + "/c.gpf"), {{0.0, 0.5, 1.0}, {7.0, 8.0}});
    const auto axes = io::read_axes(dir + "/c_axes.csv");
    REQUIRE(axes.size() == 2);
    CHECK(axes[0] == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(axes[1] == std::vector<double>{7.0, 8.0});
}

TEST_CASE("17 significant digits round-trip doubles exactly") {
    for (double v : {1.0 / 3.0, M_PI, 1e-300, -6.0221408e23, 0.1 + 0.2, 5.5555555555555294e-05}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("tabulated potentials round-trip through the field format") {
    const std::string dir = temp_dir();
    std::vector<double> lambdas = {0.0, 0.4, 1.0};
    std::vector<double> xs = {-1.0, 0.0, 1.0, 2.0};
    std::vector<std::vector<double>> slices;
    for (double l : lambdas) {
        std::vector<double> s(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) s[i] = (xs[i] - l) * (xs[i] - l);
        slices.push_back(std::move(s));
    }
    const Tabulated1D table(lambdas, xs, slices);
    io::save_tabulated_1d(dir + "/table.gpf", table);
    const Tabulated1D loaded = io::load_tabulated_1d(dir + "/table.gpf");
    CHECK(loaded.lambda_samples == lambdas);
    CHECK(loaded.x_axis == xs);
    CHECK(loaded.slices == slices);

    const Tabulated2D t2({0.0, 1.0}, {0.0, 1.0, 2.0}, {5.0, 6.0},
                         {{1, 2, 3, 4, 5, 6}, {6, 5, 4, 3, 2, 1}});
    io::save_tabulated_2d(dir + "/table2.gpf", t2);
    const Tabulated2D l2 = io::load_tabulated_2d(dir + "/table2.gpf");
    CHECK(l2.slices == t2.slices);
    CHECK(l2.y_axis == t2.y_axis);
}

namespace {
const char* minimal_optimize = R"(
experiment = optimize
grid {
  x_min = -10
  x_max = 15
  n_x = 200
  t_final = 6
  n_t = 200
}
potential {
  kind = shifted_harmonic
  x0 = 5
}
control {
}
solver {
  scheme = crank_nicolson_1d
}
oct {
  gamma = 1e-3
}
)";
}

TEST_CASE("config parsing and validation") {
    const ExperimentConfig cfg = parse_config(minimal_optimize, false);
    CHECK(cfg.kind == ExperimentKind::optimize);
    CHECK(cfg.grid.n_x == 200);
    CHECK(cfg.potential.x0 == 5.0);
    CHECK(cfg.control.initial == "linear"); // default
    CHECK(cfg.oct.optimizer == Optimizer::bfgs);
    CHECK(cfg.oct_enabled);

    SUBCASE("unknown keys are rejected with their line") {
        std::string text = minimal_optimize;
        text += "grid {\n  n_z = 4\n}\n";
        try {
            parse_config(text, false);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("grid.n_z") != std::string::npos);
            CHECK(e.line > 0);
        }
    }
    SUBCASE("missing required block") {
        CHECK_THROWS_AS(parse_config("experiment = optimize\n", false), ConfigError);
    }
    SUBCASE("malformed lines carry line numbers") {
        try {
            parse_config("experiment = propagate\nnot a statement\n", false);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("duplicate keys are rejected") {
        CHECK_THROWS_AS(
            parse_config("experiment = optimize\nexperiment = sweep\n", false),
            ConfigError);
    }
    SUBCASE("unclosed section") {
        CHECK_THROWS_AS(parse_config("grid {\n x_min = 1\n", false), ConfigError);
    }
    SUBCASE("cn with nonzero g is rejected") {
        std::string text = minimal_optimize;
        text += "solver {\n  g = 2\n}\n";
        // duplicate solver.scheme would trip first, so build a fresh text
        const char* bad = R"(
experiment = propagate
grid {
  x_min = -1
  x_max = 1
  t_final = 1
}
potential {
  kind = double_well
}
solver {
  scheme = crank_nicolson_1d
  g = 2
}
)";
        CHECK_THROWS_AS(parse_config(bad, false), ConfigError);
    }
}

TEST_CASE("list values accept ranges and commas") {
    const char* text = R"(
experiment = sweep
grid {
  x_min = -10
  x_max = 10
  t_final = 8
}
potential {
  kind = double_well
}
solver {
  scheme = split_operator_nonlinear
}
sweep {
  t_values = 1:2:0.5,4
  kappa_values = 0,20
}
)";
    const ExperimentConfig cfg = parse_config(text, false);
    CHECK(cfg.sweep.t_values == std::vector<double>{1.0, 1.5, 2.0, 4.0});
    CHECK(cfg.sweep.kappa_values == std::vector<double>{0.0, 20.0});
    CHECK_FALSE(cfg.sweep.optimize);
}

TEST_CASE("environment overrides documented per key") {
    setenv("GPEOCT_GRID_N_X", "64", 1);
    setenv("GPEOCT_OCT_MAX_ITERATIONS", "7", 1);
    const ExperimentConfig cfg = parse_config(minimal_optimize, true);
    unsetenv("GPEOCT_GRID_N_X");
    unsetenv("GPEOCT_OCT_MAX_ITERATIONS");
    CHECK(cfg.grid.n_x == 64);
    CHECK(cfg.oct.max_iterations == 7);
}

TEST_CASE("millisecond times convert with the 87Rb scale") {
    const char* text = R"(
experiment = groundstate
grid {
  x_min = -6
  x_max = 6
  t_final_ms = 8
}
potential {
  kind = three_wire_trap
}
)";
    const ExperimentConfig cfg = parse_config(text, false);
    CHECK(cfg.grid.t_final == doctest::Approx(8.0 / 1.37).epsilon(1e-12));
}

TEST_CASE("every shipped preset parses") {
    for (const auto& [name, text] : presets()) {
        if (name == "fig5_tabulated_2d") {
            // parses structurally; the table file is user-supplied
            const ExperimentConfig cfg = parse_config(text, false);
            CHECK(cfg.potential.kind == "tabulated");
            continue;
        }
        CHECK_NOTHROW((void)parse_config(text, false));
    }
    CHECK_THROWS_AS((void)preset_text("no_such_preset"), ConfigError);
}

TEST_CASE("effective config echo is idempotent") {
    const ExperimentConfig cfg = parse_config(minimal_optimize, false);
    const std::string echo1 = cfg.echo_text();
    const ExperimentConfig cfg2 = parse_config(echo1, false);
    CHECK(cfg2.echo_text() == echo1);
    CHECK(cfg2.grid.n_t == cfg.grid.n_t);
    CHECK(cfg2.oct.cost_target == cfg.oct.cost_target);
}
