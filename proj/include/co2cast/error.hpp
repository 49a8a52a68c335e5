#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace co2cast {

enum class ErrorKind {
    Schema,
    Parse,
    DuplicateKey,
    Validation,
    Domain,
    InsufficientData,
    UnfillableGap,
    DegenerateInput,
    Convergence,
    Constraint,
    Io,
    Config,
    ExhaustiveFailure,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind lets
/// callers (the pipeline, the CLI) map failures to stages and exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when no optimizer start met the convergence tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, std::vector<double> best_point, double best_objective)
        : Error(ErrorKind::Convergence, message),
          best_point_(std::move(best_point)),
          best_objective_(best_objective) {}

    const std::vector<double>& best_point() const noexcept { return best_point_; }
    double best_objective() const noexcept { return best_objective_; }

private:
    std::vector<double> best_point_;
    double best_objective_;
};

}  // namespace co2cast
