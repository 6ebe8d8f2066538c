#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpeoct/minimize.hpp"
#include "gpeoct/potential.hpp"
#include "gpeoct/propagation.hpp"

namespace gpeoct {

// Structured-text configuration: nested sections and key = value pairs.
//
//   # comment
//   experiment = optimize
//   grid {
//     x_min = -10
//     x_max = 15
//   }
//
// Unknown keys are rejected with their line number; missing required blocks
// are rejected before any computation. Values may be scalars, comma lists
// or start:stop:step ranges. Environment variables of the form
// GPEOCT_<SECTION>_<KEY> (e.g. GPEOCT_GRID_N_X) override file values.

struct RawConfig {
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::map<std::string, Entry> entries; // dotted keys, e.g. "grid.n_x"

    static RawConfig parse(const std::string& text);
    void apply_env_overrides();
    bool has_block(const std::string& section) const;
};

enum class ExperimentKind { groundstate, propagate, optimize, optimize_spatial, sweep, wigner };

std::string to_string(ExperimentKind k);

struct GridBlock {
    double x_min = 0.0, x_max = 0.0;
    int n_x = 500;
    double t_final = 0.0;
    int n_t = 500;
    bool two_dimensional = false;
    double y_min = 0.0, y_max = 0.0;
    int n_y = 128;

    Grid1D grid1d() const { return Grid1D(x_min, x_max, n_x, t_final, n_t); }
    Grid2D grid2d() const {
        return Grid2D(x_min, x_max, n_x, y_min, y_max, n_y, t_final, n_t);
    }
};

struct PotentialBlock {
    std::string kind; // shifted_harmonic | shifted_harmonic_quartic | double_well |
                      // three_wire_trap | tabulated
    double x0 = 5.0;
    double eta = 0.2;
    double d = 4.0;
    ThreeWireTrapSpec wire;
    std::string file; // tabulated table path

    /// Instantiates the 1D family (loads the table for kind = tabulated).
    Potential1D build_1d() const;
    Potential2D build_2d() const;
};

struct ControlBlock {
    std::string initial = "linear"; // linear | square_root | file
    std::string file;
};

struct SolverBlock {
    Scheme scheme = Scheme::crank_nicolson_1d;
    bool scheme_set = false;
    double g = 0.0;
    std::string offset_splitting = "auto"; // auto | on | off
    int stride = 0;                        // 0 = full trajectory storage

    bool offset_on(const std::string& potential_kind) const {
        if (offset_splitting == "on") return true;
        if (offset_splitting == "off") return false;
        return potential_kind == "three_wire_trap" || potential_kind == "tabulated";
    }
};

struct OctBlock {
    double gamma = 1e-3;
    Optimizer optimizer = Optimizer::bfgs;
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;
    double cost_target = 1e-4;
};

struct SweepBlock {
    std::vector<double> t_values;
    std::vector<double> kappa_values;
    bool optimize = false;
};

struct SpatialBlock {
    double region_min = 0.0;
    double region_max = 0.0;
    double packet_center = 0.0;
    double packet_momentum = 0.0;
    double packet_width = 1.0;
};

struct OutputBlock {
    std::string directory = "out";
    std::vector<std::string> dump; // extras: trajectory | wigner | observables
};

struct InputBlock {
    std::string state; // field file for the wigner command
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::propagate;
    GridBlock grid;
    PotentialBlock potential;
    ControlBlock control;
    SolverBlock solver;
    bool oct_enabled = false;
    OctBlock oct;
    SweepBlock sweep;
    SpatialBlock spatial;
    OutputBlock output;
    InputBlock input;

    bool wants(const std::string& extra) const;

    /// Canonical text with every default materialized; parsing it again
    /// reproduces this configuration exactly.
    std::string echo_text() const;
};

ExperimentConfig parse_config(const std::string& text, bool env_overrides = true);
ExperimentConfig load_config_file(const std::string& path, bool env_overrides = true);

} // namespace gpeoct
