#pragma once

#include <stdexcept>
#include <string>

namespace gpeoct {

/// Two fields that should live on the same grid do not.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A caller-side precondition was violated (e.g. a state that must be
/// normalized is not).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A parameter is outside its admissible range.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a point where the model diverges (e.g. on a wire).
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A linear solve or similar numerical kernel failed.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iteration did not converge within its step cap.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

/// Configuration text could not be parsed or validated. `line` is 1-based,
/// 0 when no line applies.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                         : what),
          line(line_no) {}
    int line;
};

} // namespace gpeoct
