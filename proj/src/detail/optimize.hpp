#pragma once

#include <functional>
#include <span>
#include <vector>

namespace co2cast::detail {

struct OptimOptions {
    double tolerance = 1e-8;  // relative change in the objective
    int max_iterations = 500;
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Quasi-Newton (BFGS) minimizer with central-difference gradients and a
/// backtracking Armijo line search. Non-finite objective values are treated
/// as +inf. Reports convergence when the relative decrease of the objective
/// falls below the tolerance or no descent step exists at machine precision.
OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimOptions& options = {});

}  // namespace co2cast::detail
