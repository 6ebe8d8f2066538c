#include "gpeoct/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gpeoct/errors.hpp"
#include "gpeoct/io.hpp"
#include "gpeoct/units.hpp"

extern char** environ;

namespace gpeoct {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace

RawConfig RawConfig::parse(const std::string& text) {
    RawConfig cfg;
    std::vector<std::string> stack;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "}") {
            if (stack.empty()) throw ConfigError("unmatched '}'", line_no);
            stack.pop_back();
            continue;
        }
        if (line.back() == '{') {
            const std::string name = trim(line.substr(0, line.size() - 1));
            if (!valid_name(name))
                throw ConfigError("malformed section header '" + line + "'", line_no);
            stack.push_back(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', section header or '}'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_name(key)) throw ConfigError("malformed key '" + key + "'", line_no);
        if (value.empty()) throw ConfigError("empty value for key '" + key + "'", line_no);
        std::string dotted;
        for (const auto& s : stack) dotted += s + ".";
        dotted += key;
        if (cfg.entries.count(dotted))
            throw ConfigError("duplicate key '" + dotted + "'", line_no);
        cfg.entries[dotted] = Entry{value, line_no, false};
    }
    if (!stack.empty()) throw ConfigError("unclosed section '" + stack.back() + "'", line_no);
    return cfg;
}

void RawConfig::apply_env_overrides() {
    for (char** e = environ; *e; ++e) {
        const std::string kv = *e;
        if (kv.rfind("GPEOCT_", 0) != 0) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string name = kv.substr(7, eq - 7);
        const std::string value = kv.substr(eq + 1);
        std::string lower;
        for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::string dotted;
        const auto us = lower.find('_');
        if (lower == "experiment") {
            dotted = "experiment";
        } else if (us != std::string::npos) {
            dotted = lower.substr(0, us) + "." + lower.substr(us + 1);
        } else {
            continue;
        }
        entries[dotted] = Entry{value, 0, false};
    }
}

bool RawConfig::has_block(const std::string& section) const {
    const std::string prefix = section + ".";
    for (const auto& [k, v] : entries)
        if (k.rfind(prefix, 0) == 0) return true;
    return false;
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::groundstate: return "groundstate";
        case ExperimentKind::propagate: return "propagate";
        case ExperimentKind::optimize: return "optimize";
        case ExperimentKind::optimize_spatial: return "optimize_spatial";
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::wigner: return "wigner";
    }
    return "unknown";
}

namespace {

// Typed view over RawConfig that marks entries as consumed.
struct Reader {
    const RawConfig& raw;

    const RawConfig::Entry* find(const std::string& key) const {
        const auto it = raw.entries.find(key);
        if (it == raw.entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::optional<std::string> str(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        return e->value;
    }

    std::optional<double> num(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        try {
            size_t pos = 0;
            const double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("key '" + key + "': expected a number, got '" + e->value + "'",
                              e->line);
        }
    }

    std::optional<int> integer(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        try {
            size_t pos = 0;
            const long v = std::stol(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return static_cast<int>(v);
        } catch (...) {
            throw ConfigError("key '" + key + "': expected an integer, got '" + e->value + "'",
                              e->line);
        }
    }

    std::optional<bool> boolean(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        if (e->value == "true" || e->value == "1") return true;
        if (e->value == "false" || e->value == "0") return false;
        throw ConfigError("key '" + key + "': expected true/false", e->line);
    }

    // comma list or start:stop:step range
    std::optional<std::vector<double>> list(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        const std::string& v = e->value;
        auto parse_item = [&](const std::string& item) {
            const auto c1 = item.find(':');
            if (c1 != std::string::npos) {
                const auto c2 = item.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    throw ConfigError("range must be start:stop:step", e->line);
                const double a = std::stod(item.substr(0, c1));
                const double b = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
                const double s = std::stod(item.substr(c2 + 1));
                if (!(s > 0.0)) throw ConfigError("range step must be positive", e->line);
                for (double x = a; x <= b + 1e-12 * s; x += s) out.push_back(x);
                return;
            }
            out.push_back(std::stod(item));
        };
        std::stringstream ss(v);
        std::string item;
        try {
            while (std::getline(ss, item, ',')) parse_item(trim(item));
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            throw ConfigError("key '" + key + "': malformed list '" + v + "'", e->line);
        }
        if (out.empty()) throw ConfigError("key '" + key + "': empty list", e->line);
        return out;
    }
};

void require_block(const RawConfig& raw, const std::string& section,
                   ExperimentKind kind) {
    if (!raw.has_block(section))
        throw ConfigError("experiment '" + to_string(kind) + "' requires a '" + section +
                          "' block");
}

Scheme parse_scheme(const std::string& s, int line) {
    if (s == "crank_nicolson_1d") return Scheme::crank_nicolson_1d;
    if (s == "split_operator") return Scheme::split_operator;
    if (s == "split_operator_nonlinear") return Scheme::split_operator_nonlinear;
    throw ConfigError("unknown scheme '" + s + "'", line);
}

} // namespace

Potential1D PotentialBlock::build_1d() const {
    if (kind == "shifted_harmonic") return Potential1D{ShiftedHarmonic{x0}};
    if (kind == "shifted_harmonic_quartic")
        return Potential1D{ShiftedHarmonicQuartic{x0, eta}};
    if (kind == "double_well") return Potential1D{DoubleWell{d}};
    if (kind == "three_wire_trap") return Potential1D{ThreeWire(wire)};
    if (kind == "tabulated") {
        if (file.empty()) throw ConfigError("tabulated potential needs 'file'");
        return Potential1D{io::load_tabulated_1d(file)};
    }
    throw ConfigError("unknown potential kind '" + kind + "'");
}

Potential2D PotentialBlock::build_2d() const {
    if (kind == "tabulated") {
        if (file.empty()) throw ConfigError("tabulated potential needs 'file'");
        return Potential2D{io::load_tabulated_2d(file)};
    }
    // separable: the named 1D family along x plus a unit harmonic channel in y
    return Potential2D{SeparablePotential2D{build_1d(),
                                            Potential1D{ShiftedHarmonic{0.0}}, 0.0}};
}

bool ExperimentConfig::wants(const std::string& extra) const {
    return std::find(output.dump.begin(), output.dump.end(), extra) != output.dump.end();
}

ExperimentConfig parse_config(const std::string& text, bool env_overrides) {
    RawConfig raw = RawConfig::parse(text);
    if (env_overrides) raw.apply_env_overrides();
    Reader r{raw};
    ExperimentConfig cfg;

    const auto kind_str = r.str("experiment");
    if (!kind_str) throw ConfigError("missing top-level key 'experiment'");
    if (*kind_str == "groundstate") cfg.kind = ExperimentKind::groundstate;
    else if (*kind_str == "propagate") cfg.kind = ExperimentKind::propagate;
    else if (*kind_str == "optimize") cfg.kind = ExperimentKind::optimize;
    else if (*kind_str == "optimize_spatial") cfg.kind = ExperimentKind::optimize_spatial;
    else if (*kind_str == "sweep") cfg.kind = ExperimentKind::sweep;
    else if (*kind_str == "wigner") cfg.kind = ExperimentKind::wigner;
    else
        throw ConfigError("unknown experiment kind '" + *kind_str + "'",
                          raw.entries.at("experiment").line);

    const bool needs_grid = cfg.kind != ExperimentKind::wigner;
    if (needs_grid) require_block(raw, "grid", cfg.kind);
    if (cfg.kind != ExperimentKind::wigner) require_block(raw, "potential", cfg.kind);
    if (cfg.kind == ExperimentKind::optimize || cfg.kind == ExperimentKind::sweep ||
        cfg.kind == ExperimentKind::propagate)
        require_block(raw, "solver", cfg.kind);
    if (cfg.kind == ExperimentKind::optimize || cfg.kind == ExperimentKind::optimize_spatial)
        require_block(raw, "oct", cfg.kind);
    if (cfg.kind == ExperimentKind::sweep) require_block(raw, "sweep", cfg.kind);
    if (cfg.kind == ExperimentKind::optimize_spatial) require_block(raw, "spatial", cfg.kind);
    if (cfg.kind == ExperimentKind::wigner) require_block(raw, "input", cfg.kind);

    // grid
    if (needs_grid) {
        auto need_num = [&](const char* key) {
            const auto v = r.num(key);
            if (!v) throw ConfigError(std::string("missing required key '") + key + "'");
            return *v;
        };
        cfg.grid.x_min = need_num("grid.x_min");
        cfg.grid.x_max = need_num("grid.x_max");
        cfg.grid.two_dimensional = raw.entries.count("grid.y_min") > 0;
        if (cfg.grid.two_dimensional) {
            cfg.grid.y_min = need_num("grid.y_min");
            cfg.grid.y_max = need_num("grid.y_max");
            cfg.grid.n_x = r.integer("grid.n_x").value_or(512);
            cfg.grid.n_y = r.integer("grid.n_y").value_or(128);
        } else {
            cfg.grid.n_x = r.integer("grid.n_x").value_or(500);
        }
        cfg.grid.n_t = r.integer("grid.n_t").value_or(500);
        const auto t = r.num("grid.t_final");
        const auto t_ms = r.num("grid.t_final_ms");
        if (t && t_ms)
            throw ConfigError("give either grid.t_final or grid.t_final_ms, not both");
        if (!t && !t_ms) throw ConfigError("missing required key 'grid.t_final'");
        cfg.grid.t_final = t ? *t : units::ms_to_time(*t_ms);
    }

    // potential
    if (cfg.kind != ExperimentKind::wigner) {
        const auto kind = r.str("potential.kind");
        if (!kind) throw ConfigError("missing required key 'potential.kind'");
        cfg.potential.kind = *kind;
        cfg.potential.x0 = r.num("potential.x0").value_or(cfg.potential.x0);
        cfg.potential.eta = r.num("potential.eta").value_or(cfg.potential.eta);
        cfg.potential.d = r.num("potential.d").value_or(cfg.potential.d);
        cfg.potential.file = r.str("potential.file").value_or("");
        ThreeWireTrapSpec& w = cfg.potential.wire;
        w.wire_spacing = r.num("potential.wire_spacing").value_or(w.wire_spacing);
        w.bias_field_y = r.num("potential.bias_field_y").value_or(w.bias_field_y);
        w.current_ext_base = r.num("potential.current_ext_base").value_or(w.current_ext_base);
        w.current_ext_slope = r.num("potential.current_ext_slope").value_or(w.current_ext_slope);
        w.current_c_base = r.num("potential.current_c_base").value_or(w.current_c_base);
        w.current_c_slope = r.num("potential.current_c_slope").value_or(w.current_c_slope);
        w.moment_mu_b = r.num("potential.moment_mu_b").value_or(w.moment_mu_b);
        w.height = r.num("potential.height").value_or(w.height);
        const std::string& pk = cfg.potential.kind;
        if (pk != "shifted_harmonic" && pk != "shifted_harmonic_quartic" &&
            pk != "double_well" && pk != "three_wire_trap" && pk != "tabulated")
            throw ConfigError("unknown potential kind '" + pk + "'",
                              raw.entries.at("potential.kind").line);
    }

    // control
    cfg.control.initial = r.str("control.initial").value_or("linear");
    cfg.control.file = r.str("control.file").value_or("");
    if (cfg.control.initial != "linear" && cfg.control.initial != "square_root" &&
        cfg.control.initial != "file")
        throw ConfigError("control.initial must be linear, square_root or file");
    if (cfg.control.initial == "file" && cfg.control.file.empty())
        throw ConfigError("control.initial = file requires control.file");

    // solver
    {
        const auto s = r.str("solver.scheme");
        if (s) {
            cfg.solver.scheme = parse_scheme(*s, raw.entries.at("solver.scheme").line);
            cfg.solver.scheme_set = true;
        } else {
            cfg.solver.scheme = cfg.grid.two_dimensional ? Scheme::split_operator
                                                         : Scheme::crank_nicolson_1d;
        }
        const auto g = r.num("solver.g");
        const auto kappa = r.num("solver.kappa");
        if (g && kappa) throw ConfigError("give either solver.g or solver.kappa, not both");
        cfg.solver.g = g ? *g : kappa.value_or(0.0);
        if (cfg.solver.g < 0.0) throw ConfigError("solver.g must be non-negative");
        cfg.solver.offset_splitting = r.str("solver.offset_splitting").value_or("auto");
        if (cfg.solver.offset_splitting != "auto" && cfg.solver.offset_splitting != "on" &&
            cfg.solver.offset_splitting != "off")
            throw ConfigError("solver.offset_splitting must be auto, on or off");
        cfg.solver.stride = r.integer("solver.stride").value_or(0);
        if (!cfg.solver.scheme_set && cfg.solver.g != 0.0)
            cfg.solver.scheme = Scheme::split_operator_nonlinear;
        if (cfg.solver.scheme == Scheme::crank_nicolson_1d && cfg.solver.g != 0.0)
            throw ConfigError("crank_nicolson_1d supports g = 0 only; use "
                              "split_operator_nonlinear");
    }

    // oct
    cfg.oct_enabled = raw.has_block("oct");
    if (cfg.oct_enabled) {
        cfg.oct.gamma = r.num("oct.gamma").value_or(cfg.oct.gamma);
        const auto opt = r.str("oct.optimizer");
        if (opt) {
            if (*opt == "bfgs") cfg.oct.optimizer = Optimizer::bfgs;
            else if (*opt == "gradient_descent") cfg.oct.optimizer = Optimizer::gradient_descent;
            else
                throw ConfigError("oct.optimizer must be bfgs or gradient_descent",
                                  raw.entries.at("oct.optimizer").line);
        }
        cfg.oct.max_iterations = r.integer("oct.max_iterations").value_or(cfg.oct.max_iterations);
        cfg.oct.gradient_tolerance =
            r.num("oct.gradient_tolerance").value_or(cfg.oct.gradient_tolerance);
        cfg.oct.cost_target = r.num("oct.cost_target").value_or(cfg.oct.cost_target);
        if (!(cfg.oct.gamma > 0.0)) throw ConfigError("oct.gamma must be positive");
    }

    // sweep
    if (raw.has_block("sweep")) {
        cfg.sweep.t_values = r.list("sweep.t_values").value_or(std::vector<double>{});
        cfg.sweep.kappa_values =
            r.list("sweep.kappa_values").value_or(std::vector<double>{0.0});
        cfg.sweep.optimize = r.boolean("sweep.optimize").value_or(false);
        if (cfg.kind == ExperimentKind::sweep && cfg.sweep.t_values.empty())
            throw ConfigError("sweep.t_values is required for sweep experiments");
    }

    // spatial
    if (raw.has_block("spatial")) {
        cfg.spatial.region_min = r.num("spatial.region_min").value_or(0.0);
        const auto rm = r.num("spatial.region_max");
        if (!rm && cfg.kind == ExperimentKind::optimize_spatial)
            throw ConfigError("missing required key 'spatial.region_max'");
        cfg.spatial.region_max = rm.value_or(0.0);
        cfg.spatial.packet_center = r.num("spatial.packet_center").value_or(0.0);
        cfg.spatial.packet_momentum = r.num("spatial.packet_momentum").value_or(0.0);
        cfg.spatial.packet_width = r.num("spatial.packet_width").value_or(1.0);
    }

    // output
    cfg.output.directory = r.str("output.directory").value_or("out");
    {
        const auto* e = r.find("output.dump");
        if (e) {
            std::stringstream ss(e->value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item != "trajectory" && item != "wigner" && item != "observables")
                    throw ConfigError("output.dump accepts trajectory, wigner, observables",
                                      e->line);
                cfg.output.dump.push_back(item);
            }
        }
    }

    // input
    cfg.input.state = r.str("input.state").value_or("");
    if (cfg.kind == ExperimentKind::wigner && cfg.input.state.empty())
        throw ConfigError("wigner experiments require input.state");

    // typo protection: everything present must have been consumed
    for (const auto& [key, entry] : raw.entries)
        if (!entry.used)
            throw ConfigError("unknown key '" + key + "'", entry.line);

    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, bool env_overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), env_overrides);
}

std::string ExperimentConfig::echo_text() const {
    std::ostringstream out;
    auto num = [](double v) { return io::format_double(v); };
    out << "experiment = " << to_string(kind) << "\n";
    if (kind != ExperimentKind::wigner) {
        out << "grid {\n";
        out << "  x_min = " << num(grid.x_min) << "\n";
        out << "  x_max = " << num(grid.x_max) << "\n";
        out << "  n_x = " << grid.n_x << "\n";
        if (grid.two_dimensional) {
            out << "  y_min = " << num(grid.y_min) << "\n";
            out << "  y_max = " << num(grid.y_max) << "\n";
            out << "  n_y = " << grid.n_y << "\n";
        }
        out << "  t_final = " << num(grid.t_final) << "\n";
        out << "  n_t = " << grid.n_t << "\n";
        out << "}\n";
        out << "potential {\n";
        out << "  kind = " << potential.kind << "\n";
        if (potential.kind == "shifted_harmonic" ||
            potential.kind == "shifted_harmonic_quartic")
            out << "  x0 = " << num(potential.x0) << "\n";
        if (potential.kind == "shifted_harmonic_quartic")
            out << "  eta = " << num(potential.eta) << "\n";
        if (potential.kind == "double_well") out << "  d = " << num(potential.d) << "\n";
        if (potential.kind == "three_wire_trap") {
            const ThreeWireTrapSpec& w = potential.wire;
            out << "  wire_spacing = " << num(w.wire_spacing) << "\n";
            out << "  bias_field_y = " << num(w.bias_field_y) << "\n";
            out << "  current_ext_base = " << num(w.current_ext_base) << "\n";
            out << "  current_ext_slope = " << num(w.current_ext_slope) << "\n";
            out << "  current_c_base = " << num(w.current_c_base) << "\n";
            out << "  current_c_slope = " << num(w.current_c_slope) << "\n";
            out << "  moment_mu_b = " << num(w.moment_mu_b) << "\n";
            out << "  height = " << num(w.height) << "\n";
        }
        if (potential.kind == "tabulated") out << "  file = " << potential.file << "\n";
        out << "}\n";
        out << "control {\n";
        out << "  initial = " << control.initial << "\n";
        if (!control.file.empty()) out << "  file = " << control.file << "\n";
        out << "}\n";
        out << "solver {\n";
        out << "  scheme = "
            << (solver.scheme == Scheme::crank_nicolson_1d
                    ? "crank_nicolson_1d"
                    : solver.scheme == Scheme::split_operator ? "split_operator"
                                                              : "split_operator_nonlinear")
            << "\n";
        out << "  g = " << num(solver.g) << "\n";
        out << "  offset_splitting = " << solver.offset_splitting << "\n";
        if (solver.stride > 0) out << "  stride = " << solver.stride << "\n";
        out << "}\n";
    }
    if (oct_enabled) {
        out << "oct {\n";
        out << "  gamma = " << num(oct.gamma) << "\n";
        out << "  optimizer = "
            << (oct.optimizer == Optimizer::bfgs ? "bfgs" : "gradient_descent") << "\n";
        out << "  max_iterations = " << oct.max_iterations << "\n";
        out << "  gradient_tolerance = " << num(oct.gradient_tolerance) << "\n";
        out << "  cost_target = " << num(oct.cost_target) << "\n";
        out << "}\n";
    }
    if (kind == ExperimentKind::sweep) {
        out << "sweep {\n";
        out << "  t_values = ";
        for (size_t i = 0; i < sweep.t_values.size(); ++i)
            out << (i ? "," : "") << num(sweep.t_values[i]);
        out << "\n  kappa_values = ";
        for (size_t i = 0; i < sweep.kappa_values.size(); ++i)
            out << (i ? "," : "") << num(sweep.kappa_values[i]);
        out << "\n  optimize = " << (sweep.optimize ? "true" : "false") << "\n";
        out << "}\n";
    }
    if (kind == ExperimentKind::optimize_spatial) {
        out << "spatial {\n";
        out << "  region_min = " << num(spatial.region_min) << "\n";
        out << "  region_max = " << num(spatial.region_max) << "\n";
        out << "  packet_center = " << num(spatial.packet_center) << "\n";
        out << "  packet_momentum = " << num(spatial.packet_momentum) << "\n";
        out << "  packet_width = " << num(spatial.packet_width) << "\n";
        out << "}\n";
    }
    if (kind == ExperimentKind::wigner) {
        out << "input {\n";
        out << "  state = " << input.state << "\n";
        out << "}\n";
    }
    out << "output {\n";
    out << "  directory = " << output.directory << "\n";
    if (!output.dump.empty()) {
        out << "  dump = ";
        for (size_t i = 0; i < output.dump.size(); ++i)
            out << (i ? "," : "") << output.dump[i];
        out << "\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace gpeoct
