#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gpeoct/errors.hpp"
#include "gpeoct/experiment.hpp"
#include "gpeoct/presets.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir = "out";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file");
    cmd->add_option("--preset", args.preset, "named preset configuration");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads", args.threads, "worker threads for sweeps")
        ->capture_default_str();
}

int execute(const std::string& subcommand, const CommonArgs& args) {
    using namespace gpeoct;
    if (args.config_path.empty() == args.preset.empty()) {
        std::cerr << "error: give exactly one of --config or --preset\n";
        return 2;
    }

    ExperimentConfig cfg;
    try {
        if (!args.preset.empty()) {
            cfg = parse_config(preset_text(args.preset));
        } else {
            cfg = load_config_file(args.config_path);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const std::string kind = to_string(cfg.kind);
    std::string expected = subcommand;
    for (char& c : expected)
        if (c == '-') c = '_';
    if (kind != expected) {
        std::cerr << "error: configuration declares experiment '" << kind
                  << "' but the subcommand is '" << subcommand << "'\n";
        return 2;
    }

    try {
        const RunOutcome outcome = run_experiment(cfg, args.out_dir, args.threads);
        for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << outcome.directory << ": " << outcome.artifacts.size()
                  << " artifacts (see manifest.csv)\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal control of condensate transport in parameterized traps"};
    app.require_subcommand(1);

    const char* names[] = {"groundstate", "propagate", "optimize",
                           "optimize-spatial", "sweep", "wigner"};
    const char* blurbs[] = {
        "relax the groundstate of the lambda = 0 potential",
        "propagate the initial state under a control ramp",
        "optimize the control trajectory lambda(t)",
        "optimize a spatial control profile lambda(x)",
        "scan transfer times and nonlinearities",
        "compute the phase-space distribution of a stored state"};

    CommonArgs args[6];
    for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(names[i], blurbs[i]), args[i]);

    CLI11_PARSE(app, argc, argv);

    for (int i = 0; i < 6; ++i)
        if (app.get_subcommand(names[i])->parsed()) return execute(names[i], args[i]);
    return 2;
}
