#include "gpeoct/presets.hpp"

#include "gpeoct/errors.hpp"

namespace gpeoct {

namespace {

// Domain extents are implementation choices: wide enough that the density
// at the boundary stays below the edge-warning threshold for the motion the
// experiment produces.

const char* fig1_single_well = R"(# single-well transport, optimized control
experiment = optimize
grid {
  x_min = -10
  x_max = 15
  n_x = 500
  t_final = 9
  n_t = 500
}
potential {
  kind = shifted_harmonic
  x0 = 5
}
control {
  initial = linear
}
solver {
  scheme = crank_nicolson_1d
}
oct {
  gamma = 1e-3
  optimizer = bfgs
}
)";

const char* fig1_quartic = R"(# single-well transport with a quartic perturbation
experiment = optimize
grid {
  x_min = -10
  x_max = 15
  n_x = 500
  t_final = 9
  n_t = 500
}
potential {
  kind = shifted_harmonic_quartic
  x0 = 5
  eta = 0.2
}
control {
  initial = linear
}
solver {
  scheme = crank_nicolson_1d
}
oct {
  gamma = 1e-3
  optimizer = bfgs
}
)";

const char* fig3_double_well = R"(# single-to-double-well splitting, optimized control
experiment = optimize
grid {
  x_min = -10
  x_max = 10
  n_x = 500
  t_final = 9
  n_t = 500
}
potential {
  kind = double_well
  d = 4
}
control {
  initial = linear
}
solver {
  scheme = crank_nicolson_1d
}
oct {
  gamma = 1e-3
  optimizer = bfgs
}
)";

const char* fig4_three_wire = R"(# chip-trap splitting via wire-current modulation; times in ms (87Rb)
experiment = optimize
grid {
  x_min = -6
  x_max = 6
  n_x = 500
  t_final_ms = 8
  n_t = 500
}
potential {
  kind = three_wire_trap
}
control {
  initial = linear
}
solver {
  scheme = split_operator
  offset_splitting = on
}
oct {
  gamma = 1e-3
  optimizer = bfgs
}
)";

const char* fig5_tabulated_2d = R"(# rf-dressed double well from a user-supplied table; the control scales the
# rf field strength as B_rf = 0.5 + lambda * 0.3 G (table supplied externally,
# one slice per lambda sample). Axes of the table must match the grid.
experiment = optimize
grid {
  x_min = -6
  x_max = 6
  n_x = 512
  y_min = -3
  y_max = 3
  n_y = 128
  t_final_ms = 2
  n_t = 500
}
potential {
  kind = tabulated
  file = rf_dressed_table.gpf
}
control {
  initial = linear
}
solver {
  scheme = split_operator
  offset_splitting = on
}
oct {
  gamma = 1e-3
  optimizer = bfgs
}
)";

const char* fig6_nonlinear_map = R"(# cost landscape over transfer time and nonlinearity, linear ramp
experiment = sweep
grid {
  x_min = -10
  x_max = 10
  n_x = 500
  t_final = 8
  n_t = 500
}
potential {
  kind = double_well
  d = 4
}
control {
  initial = linear
}
solver {
  scheme = split_operator_nonlinear
}
sweep {
  t_values = 1:12:0.25
  kappa_values = 0,2.5,5,7.5,10,12.5,15,17.5,20
  optimize = false
}
)";

const char* single_well_T9_linear = R"(# single-well transport at T = 9 with the plain linear ramp
experiment = propagate
grid {
  x_min = -10
  x_max = 15
  n_x = 500
  t_final = 9
  n_t = 500
}
potential {
  kind = shifted_harmonic
  x0 = 5
}
control {
  initial = linear
}
solver {
  scheme = crank_nicolson_1d
}
oct {
  gamma = 1e-3
}
)";

const char* sweep_single_well = R"(# linear-ramp cost versus transfer time for the single well
experiment = sweep
grid {
  x_min = -10
  x_max = 15
  n_x = 500
  t_final = 9
  n_t = 500
}
potential {
  kind = shifted_harmonic
  x0 = 5
}
control {
  initial = linear
}
solver {
  scheme = crank_nicolson_1d
}
sweep {
  t_values = 1:12:0.25
  kappa_values = 0
  optimize = false
}
)";

} // namespace

const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table = {
        {"fig1_single_well", fig1_single_well},
        {"fig1_quartic", fig1_quartic},
        {"fig3_double_well", fig3_double_well},
        {"fig4_three_wire", fig4_three_wire},
        {"fig5_tabulated_2d", fig5_tabulated_2d},
        {"fig6_nonlinear_map", fig6_nonlinear_map},
        {"single_well_T9_linear", single_well_T9_linear},
        {"sweep_single_well", sweep_single_well},
    };
    return table;
}

std::string preset_text(const std::string& name) {
    const auto& table = presets();
    const auto it = table.find(name);
    if (it != table.end()) return it->second;
    std::string names;
    for (const auto& [k, v] : table) names += (names.empty() ? "" : ", ") + k;
    throw ConfigError("unknown preset '" + name + "'; available: " + names);
}

} // namespace gpeoct
