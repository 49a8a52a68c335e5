#include "detail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace co2cast::detail {

namespace {

double safe_eval(const Objective& f, std::span<const double> x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

std::vector<double> gradient(const Objective& f, std::vector<double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        const double orig = x[i];
        x[i] = orig + h;
        const double fp = safe_eval(f, x);
        x[i] = orig - h;
        const double fm = safe_eval(f, x);
        x[i] = orig;
        g[i] = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * h) : 0.0;
    }
    return g;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimOptions& options) {
    const std::size_t n = x0.size();
    OptimResult result;
    result.x = std::move(x0);
    result.value = safe_eval(f, result.x);
    if (n == 0) {
        result.converged = std::isfinite(result.value);
        return result;
    }
    if (!std::isfinite(result.value)) return result;

    // Inverse Hessian approximation, row-major.
    std::vector<double> H(n * n, 0.0);
    const auto reset = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
    };
    reset();
    bool fresh = true;

    auto g = gradient(f, result.x);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter + 1;

        std::vector<double> p(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p[i] -= H[i * n + j] * g[j];
        double slope = dot(g, p);
        if (!(slope < 0.0)) {
            reset();
            fresh = true;
            for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
            slope = dot(g, p);
            if (!(slope < 0.0)) {
                result.converged = true;  // zero gradient
                return result;
            }
        }

        // With an identity metric the raw gradient step can be arbitrarily
        // long; cap it so saturating reparameterizations are not overshot.
        double step = 1.0;
        if (fresh) {
            double pmax = 0.0;
            for (double v : p) pmax = std::max(pmax, std::abs(v));
            if (pmax > 1.0) step = 1.0 / pmax;
        }
        std::vector<double> x_new(n);
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = result.x[i] + step * p[i];
            f_new = safe_eval(f, x_new);
            if (f_new <= result.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!fresh) {
                reset();
                fresh = true;
                continue;
            }
            result.converged = true;  // no descent at machine precision
            return result;
        }

        const double f_old = result.value;
        auto g_new = gradient(f, x_new);
        std::vector<double> s(n);
        std::vector<double> yv(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - result.x[i];
            yv[i] = g_new[i] - g[i];
        }
        result.x = std::move(x_new);
        result.value = f_new;
        g = std::move(g_new);

        if (std::abs(f_old - f_new) <= options.tolerance * (std::abs(f_old) + options.tolerance)) {
            result.converged = true;
            return result;
        }

        const double sy = dot(s, yv);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(yv, yv))) {
            std::vector<double> Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i * n + j] * yv[j];
            const double yHy = dot(yv, Hy);
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i * n + j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] - s[i] * Hy[j]);
                }
            }
            fresh = false;
        }
    }
    return result;
}

}  // namespace co2cast::detail
