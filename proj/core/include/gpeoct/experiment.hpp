#pragma once

#include <string>
#include <vector>

#include "gpeoct/config.hpp"

namespace gpeoct {

struct RunOutcome {
    std::string directory;
    std::vector<std::string> artifacts; // relative paths, manifest excluded
    std::vector<std::string> warnings;
};

/// Executes the configured experiment, writing every requested artifact, the
/// effective configuration echo and a manifest with checksums into out_dir.
/// Deterministic: identical configurations reproduce identical bytes.
/// threads > 1 parallelizes independent sweep points; the output ordering
/// stays fixed.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          int threads = 1);

} // namespace gpeoct
