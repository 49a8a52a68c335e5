#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/models.hpp"
#include "co2cast/preprocess.hpp"
#include "detail/model_common.hpp"
#include "detail/optimize.hpp"
#include "detail/polynomial.hpp"

namespace co2cast {

namespace {

// Unconstrained values are mapped through tanh to partial autocorrelations;
// the clamp keeps them strictly inside (-1, 1) in double precision.
constexpr double kMaxUnconstrained = 8.0;

std::vector<double> to_pacf(std::span<const double> x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = std::tanh(std::clamp(x[i], -kMaxUnconstrained, kMaxUnconstrained));
    }
    return r;
}

std::vector<double> negated(std::vector<double> v) {
    for (auto& x : v) x = -x;
    return v;
}

struct CssProblem {
    std::vector<double> w;  // differenced series
    SarimaOrder order;
    std::size_t ar_len = 0;

    ArmaCoefficients coefficients(std::span<const double> x) const {
        const auto p = static_cast<std::size_t>(order.base.p);
        const auto q = static_cast<std::size_t>(order.base.q);
        const auto P = static_cast<std::size_t>(order.P);
        const auto Q = static_cast<std::size_t>(order.Q);
        ArmaCoefficients c;
        c.ar = detail::pacf_to_ar(to_pacf(x.subspan(0, p)));
        c.ma = negated(detail::pacf_to_ar(to_pacf(x.subspan(p, q))));
        c.seasonal_ar = detail::pacf_to_ar(to_pacf(x.subspan(p + q, P)));
        c.seasonal_ma = negated(detail::pacf_to_ar(to_pacf(x.subspan(p + q + P, Q))));
        return c;
    }

    // Residual filter e_t = u_t - sum a_i u_{t-i} - sum b_j e_{t-j}, with
    // e_t = 0 for the first ar_len positions.
    std::vector<double> filter(std::span<const double> u, std::span<const double> a,
                               std::span<const double> b) const {
        std::vector<double> e(u.size(), 0.0);
        for (std::size_t t = ar_len; t < u.size(); ++t) {
            double v = u[t];
            for (std::size_t i = 1; i < a.size(); ++i) v += a[i] * u[t - i];  // a holds the lag polynomial
            for (std::size_t j = 1; j < b.size() && j <= t; ++j) v -= b[j] * e[t - j];
            e[t] = v;
        }
        return e;
    }

    struct Evaluation {
        double css = 0.0;
        double mean = 0.0;
        std::vector<double> residuals;
    };

    // Residuals are affine in the intercept: e(mu) = e(w) - mu e(1), so the
    // CSS-optimal intercept has a closed form for any ARMA coefficients.
    Evaluation evaluate(const ArmaCoefficients& c) const {
        const auto a = detail::expanded_ar_poly(c, order.s);
        const auto b = detail::expanded_ma_poly(c, order.s);
        const auto e_w = filter(w, a, b);
        const std::vector<double> ones(w.size(), 1.0);
        const auto e_1 = filter(ones, a, b);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t t = ar_len; t < w.size(); ++t) {
            num += e_w[t] * e_1[t];
            den += e_1[t] * e_1[t];
        }
        Evaluation ev;
        ev.mean = den > 0.0 ? num / den : 0.0;
        ev.residuals.resize(w.size() - ar_len);
        for (std::size_t t = ar_len; t < w.size(); ++t) {
            const double e = e_w[t] - ev.mean * e_1[t];
            ev.residuals[t - ar_len] = e;
            ev.css += e * e;
        }
        return ev;
    }
};

std::vector<std::vector<double>> starting_points(const SarimaOrder& o, int count) {
    // (AR-block value, MA-block value) pairs in the unconstrained space.
    static constexpr double kPatterns[][2] = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.5, -0.5}, {-0.5, 0.5}};
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
        const auto& pat = kPatterns[static_cast<std::size_t>(k) % std::size(kPatterns)];
        const double scale = 1.0 + static_cast<double>(k / static_cast<int>(std::size(kPatterns)));
        std::vector<double> x;
        x.insert(x.end(), static_cast<std::size_t>(o.base.p), pat[0] / scale);
        x.insert(x.end(), static_cast<std::size_t>(o.base.q), pat[1] / scale);
        x.insert(x.end(), static_cast<std::size_t>(o.P), pat[0] / scale);
        x.insert(x.end(), static_cast<std::size_t>(o.Q), pat[1] / scale);
        out.push_back(std::move(x));
    }
    return out;
}

FittedModel fit_css(const AnnualSeries& series, const SarimaOrder& order, ModelFamily family, ModelSpec spec,
                    const FitOptions& options) {
    order.validate();
    if (series.has_gaps()) {
        throw Error(ErrorKind::Domain, fmt::format("series {} has gaps; interpolate before fitting", series.country));
    }
    const auto& o = order;
    const int s = o.s;
    const std::size_t min_len =
        static_cast<std::size_t>(o.base.p + o.base.q + o.P * s + o.Q * s + o.base.d + o.D * s + 10);
    if (series.size() < min_len) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("order needs at least {} observations, got {}", min_len, series.size()));
    }

    CssProblem problem;
    problem.order = o;
    problem.w = difference(series.values, o.base.d);
    for (int k = 0; k < o.D; ++k) {
        std::vector<double> next(problem.w.size() - static_cast<std::size_t>(s));
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = problem.w[t + static_cast<std::size_t>(s)] - problem.w[t];
        problem.w = std::move(next);
    }
    problem.ar_len = static_cast<std::size_t>(o.base.p + s * o.P);

    const std::size_t nparams = static_cast<std::size_t>(o.base.p + o.base.q + o.P + o.Q);
    const auto objective = [&problem](std::span<const double> x) {
        return problem.evaluate(problem.coefficients(x)).css;
    };

    std::vector<double> best_x(nparams, 0.0);
    bool converged = true;
    if (nparams > 0) {
        detail::OptimOptions opt;
        opt.tolerance = options.tolerance;
        opt.max_iterations = options.max_iterations;
        double best_converged = std::numeric_limits<double>::infinity();
        double best_any = std::numeric_limits<double>::infinity();
        std::vector<double> best_any_x;
        bool found = false;
        for (auto& start : starting_points(o, std::max(1, options.starts))) {
            const auto r = detail::minimize_bfgs(objective, std::move(start), opt);
            if (r.value < best_any) {
                best_any = r.value;
                best_any_x = r.x;
            }
            if (r.converged && r.value < best_converged) {
                best_converged = r.value;
                best_x = r.x;
                found = true;
            }
        }
        if (!found) {
            auto c = problem.coefficients(best_any_x);
            std::vector<double> point;
            for (auto* v : {&c.ar, &c.ma, &c.seasonal_ar, &c.seasonal_ma}) point.insert(point.end(), v->begin(), v->end());
            throw ConvergenceError(
                fmt::format("CSS optimizer did not converge from {} starts for series {}", options.starts,
                            series.country),
                std::move(point), best_any);
        }
        converged = found;
    }

    FittedModel m;
    m.family = family;
    m.spec = std::move(spec);
    m.arma = problem.coefficients(best_x);
    if (!is_stationary(m.arma.ar) || !is_stationary(m.arma.seasonal_ar)) {
        throw Error(ErrorKind::Constraint, "estimated AR polynomial has a root on or inside the unit circle");
    }
    if (!is_invertible(m.arma.ma) || !is_invertible(m.arma.seasonal_ma)) {
        throw Error(ErrorKind::Constraint, "estimated MA polynomial has a root on or inside the unit circle");
    }

    auto ev = problem.evaluate(m.arma);
    const double n_eff = static_cast<double>(ev.residuals.size());
    m.mean = ev.mean;
    m.sigma2 = std::max(ev.css / n_eff, detail::variance_floor(series.values));
    m.n_obs = static_cast<int>(series.size());
    m.loglik = -0.5 * n_eff * (std::log(2.0 * std::numbers::pi * m.sigma2) + 1.0);
    m.aic = n_eff * std::log(m.sigma2) + 2.0 * static_cast<double>(nparams + 1);
    m.residuals = std::move(ev.residuals);
    m.history = series.values;
    m.start_year = series.start_year;
    m.converged = converged;
    return m;
}

}  // namespace

FittedModel fit_arima(const AnnualSeries& series, const ArimaOrder& order, const FitOptions& options) {
    order.validate();
    return fit_css(series, SarimaOrder{order, 0, 0, 0, 1}, ModelFamily::Arima, order, options);
}

FittedModel fit_sarima(const AnnualSeries& series, const SarimaOrder& order, const FitOptions& options) {
    return fit_css(series, order, ModelFamily::Sarima, order, options);
}

}  // namespace co2cast
