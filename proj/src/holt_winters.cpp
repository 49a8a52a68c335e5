#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/models.hpp"
#include "detail/model_common.hpp"
#include "detail/optimize.hpp"

namespace co2cast {

namespace {

struct HoltRun {
    double sse = 0.0;
    std::vector<double> residuals;
    HoltState state;
};

std::size_t min_length(int seasonal_period) {
    return seasonal_period > 1 ? 2 * static_cast<std::size_t>(seasonal_period) : 4;
}

// Error-correction form of additive damped Holt-Winters:
//   yhat = l + phi b + s,  e = y - yhat
//   l' = l + phi b + alpha e;  b' = phi b + alpha beta e;  s' = s + gamma (1 - alpha) e
// Non-seasonal start: l = y0, b = mean of the first min(4, n-1) differences.
// Seasonal start: first-season mean centred by the between-season slope.
HoltRun run_holt(std::span<const double> y, const HoltParams& p) {
    const std::size_t n = y.size();
    const int m = p.seasonal_period;
    HoltRun run;
    std::vector<double> season;  // season[0] applies to the next observation
    std::size_t first = 0;
    double level = 0.0;
    double trend = 0.0;
    if (m <= 1) {
        const std::size_t k = std::min<std::size_t>(4, n - 1);
        level = y[0];
        trend = (y[k] - y[0]) / static_cast<double>(k);
        first = 1;
    } else {
        const auto um = static_cast<std::size_t>(m);
        const double mean1 = std::accumulate(y.begin(), y.begin() + m, 0.0) / m;
        const double mean2 = std::accumulate(y.begin() + m, y.begin() + 2 * m, 0.0) / m;
        trend = (mean2 - mean1) / m;
        const double centre = (m - 1) / 2.0;
        level = mean1 + trend * centre;  // level at the last point of season one
        season.resize(um);
        for (std::size_t i = 0; i < um; ++i) {
            season[i] = y[i] - (mean1 + trend * (static_cast<double>(i) - centre));
        }
        first = um;
    }

    run.residuals.reserve(n - first);
    for (std::size_t t = first; t < n; ++t) {
        const double s0 = season.empty() ? 0.0 : season.front();
        const double yhat = level + p.phi * trend + s0;
        const double e = y[t] - yhat;
        level = level + p.phi * trend + p.alpha * e;
        trend = p.phi * trend + p.alpha * p.beta * e;
        if (!season.empty()) {
            season.erase(season.begin());
            season.push_back(s0 + p.gamma * (1.0 - p.alpha) * e);
        }
        run.residuals.push_back(e);
        run.sse += e * e;
    }
    run.state = {level, trend, std::move(season)};
    return run;
}

int smoothing_parameter_count(int seasonal_period) { return seasonal_period > 1 ? 4 : 3; }

FittedModel assemble(const AnnualSeries& series, const HoltParams& params, HoltRun run, bool converged) {
    FittedModel m;
    m.family = ModelFamily::HoltWinters;
    m.spec = params;
    m.state = std::move(run.state);
    const int k = smoothing_parameter_count(params.seasonal_period);
    const double n = static_cast<double>(series.size());
    m.sigma2 = std::max(run.sse / std::max(1.0, n - k), detail::variance_floor(series.values));
    const double n_res = static_cast<double>(run.residuals.size());
    const double sigma2_ml = std::max(run.sse / n_res, detail::variance_floor(series.values));
    m.n_obs = static_cast<int>(series.size());
    m.loglik = -0.5 * n_res * (std::log(2.0 * std::numbers::pi * sigma2_ml) + 1.0);
    m.aic = n_res * std::log(sigma2_ml) + 2.0 * k;
    m.residuals = std::move(run.residuals);
    m.history = series.values;
    m.start_year = series.start_year;
    m.converged = converged;
    return m;
}

void check_input(const AnnualSeries& series, int seasonal_period) {
    if (series.has_gaps()) {
        throw Error(ErrorKind::Domain, fmt::format("series {} has gaps; interpolate before fitting", series.country));
    }
    const auto need = min_length(seasonal_period);
    if (series.size() < need) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("Holt-Winters needs at least {} observations, got {}", need, series.size()));
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Bounded {
    double lo;
    double hi;
    double map(double x) const { return lo + (hi - lo) * logistic(x); }
    double unmap(double v) const { return logit((v - lo) / (hi - lo)); }
};

constexpr Bounded kAlpha{1e-4, 0.9999};
constexpr Bounded kBeta{0.0, 0.9999};
constexpr Bounded kGamma{0.0, 0.9999};

}  // namespace

void HoltParams::validate() const {
    const bool ok = alpha > 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0 && phi > 0.0 && phi <= 1.0 &&
                    seasonal_period >= 1 && (seasonal_period == 1 || (gamma >= 0.0 && gamma < 1.0));
    if (!ok) {
        throw Error(ErrorKind::Domain, fmt::format("invalid Holt-Winters parameters (alpha={}, beta={}, phi={}, "
                                                   "gamma={}, period={})",
                                                   alpha, beta, phi, gamma, seasonal_period));
    }
}

FittedModel fit_holt_winters(const AnnualSeries& series, const HoltParams& params) {
    params.validate();
    check_input(series, params.seasonal_period);
    return assemble(series, params, run_holt(series.values, params), true);
}

FittedModel fit_holt_winters(const AnnualSeries& series, const HoltSearch& search, const FitOptions& options) {
    if (search.seasonal_period < 1) throw Error(ErrorKind::Domain, "seasonal period must be >= 1");
    for (double phi : search.phi_grid) {
        if (!(phi > 0.0 && phi <= 1.0)) throw Error(ErrorKind::Domain, fmt::format("damping {} outside (0, 1]", phi));
    }
    check_input(series, search.seasonal_period);
    const bool seasonal = search.seasonal_period > 1;
    const std::span<const double> y = series.values;

    detail::OptimOptions opt;
    opt.tolerance = options.tolerance;
    opt.max_iterations = options.max_iterations;
    const Bounded phi_range{search.phi_min, 1.0};

    // x = [alpha, beta, (gamma), (phi)] in unconstrained coordinates.
    const auto decode = [&](std::span<const double> x, std::optional<double> fixed_phi) {
        HoltParams p;
        p.seasonal_period = search.seasonal_period;
        p.alpha = kAlpha.map(x[0]);
        p.beta = kBeta.map(x[1]);
        std::size_t k = 2;
        if (seasonal) p.gamma = kGamma.map(x[k++]);
        p.phi = fixed_phi ? *fixed_phi : phi_range.map(x[k]);
        return p;
    };

    static constexpr double kStarts[][3] = {{0.5, 0.1, 0.1}, {0.2, 0.05, 0.05}, {0.8, 0.3, 0.3}};
    const int nstarts = std::clamp(options.starts, 1, static_cast<int>(std::size(kStarts)));

    HoltParams best;
    double best_sse = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    double best_any = std::numeric_limits<double>::infinity();
    std::vector<double> best_point;

    const auto search_with = [&](std::optional<double> fixed_phi) {
        for (int s = 0; s < nstarts; ++s) {
            std::vector<double> x0 = {kAlpha.unmap(kStarts[s][0]), kBeta.unmap(kStarts[s][1])};
            if (seasonal) x0.push_back(kGamma.unmap(kStarts[s][2]));
            if (!fixed_phi) x0.push_back(phi_range.unmap(0.9));
            const auto objective = [&](std::span<const double> x) { return run_holt(y, decode(x, fixed_phi)).sse; };
            const auto r = detail::minimize_bfgs(objective, std::move(x0), opt);
            const auto p = decode(r.x, fixed_phi);
            if (r.value < best_any) {
                best_any = r.value;
                best_point = {p.alpha, p.beta, p.phi, p.gamma};
            }
            if (r.converged && r.value < best_sse) {
                best_sse = r.value;
                best = p;
                any_converged = true;
            }
        }
    };
    for (double phi : search.phi_grid) search_with(phi);
    search_with(std::nullopt);

    if (!any_converged) {
        throw ConvergenceError(
            fmt::format("Holt-Winters parameter search did not converge for series {}", series.country), best_point,
            best_any);
    }
    return assemble(series, best, run_holt(y, best), true);
}

}  // namespace co2cast
