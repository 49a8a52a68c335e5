#include "co2cast/models.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/preprocess.hpp"
#include "co2cast/random.hpp"
#include "detail/model_common.hpp"
#include "detail/polynomial.hpp"

namespace co2cast {

std::string_view to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::Arima: return "ARIMA";
        case ModelFamily::Sarima: return "SARIMA";
        case ModelFamily::HoltWinters: return "HOLT_WINTERS";
    }
    return "UNKNOWN";
}

ModelFamily parse_model_family(std::string_view text) {
    if (text == "ARIMA") return ModelFamily::Arima;
    if (text == "SARIMA") return ModelFamily::Sarima;
    if (text == "HOLT_WINTERS") return ModelFamily::HoltWinters;
    throw Error(ErrorKind::Parse, fmt::format("unknown model family '{}'", text));
}

void ArimaOrder::validate() const {
    if (p < 0 || q < 0 || d < 0 || p > 5 || q > 5 || d > 2) {
        throw Error(ErrorKind::Domain, fmt::format("invalid ARIMA order ({},{},{})", p, d, q));
    }
}

void SarimaOrder::validate() const {
    base.validate();
    if (s < 1) throw Error(ErrorKind::Domain, fmt::format("seasonal period must be >= 1, got {}", s));
    if (P < 0 || Q < 0 || D < 0 || P > 5 || Q > 5 || D > 1) {
        throw Error(ErrorKind::Domain, fmt::format("invalid seasonal order ({},{},{})", P, D, Q));
    }
    if (s == 1 && (P != 0 || D != 0 || Q != 0)) {
        throw Error(ErrorKind::Domain, "seasonal period 1 requires P = D = Q = 0");
    }
}

SarimaOrder FittedModel::sarima_order() const {
    if (const auto* a = std::get_if<ArimaOrder>(&spec)) return SarimaOrder{*a, 0, 0, 0, 1};
    if (const auto* s = std::get_if<SarimaOrder>(&spec)) return *s;
    throw Error(ErrorKind::Domain, "Holt-Winters model has no ARIMA order");
}

bool is_stationary(std::span<const double> ar) { return detail::ar_to_pacf(ar).has_value(); }

bool is_invertible(std::span<const double> ma) {
    std::vector<double> neg(ma.begin(), ma.end());
    for (auto& v : neg) v = -v;
    return detail::ar_to_pacf(neg).has_value();
}

double normal_quantile_two_sided(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorKind::Domain, fmt::format("interval level {} outside (0, 1)", level));
    }
    if (level == 0.95) return 1.959964;
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
}

namespace {

// Full AR polynomial on the original scale, including differencing:
// phi(B) Phi(B^s) (1-B)^d (1-B^s)^D.
std::vector<double> integrated_ar_poly(const FittedModel& m) {
    const auto o = m.sarima_order();
    auto poly = detail::expanded_ar_poly(m.arma, o.s);
    poly = detail::poly_mul(poly, detail::difference_poly(o.base.d, 1));
    poly = detail::poly_mul(poly, detail::difference_poly(o.D, o.s));
    return poly;
}

std::vector<double> arima_points(const FittedModel& m, int horizon) {
    const auto o = m.sarima_order();
    const auto a = integrated_ar_poly(m);
    const auto b = detail::expanded_ma_poly(m.arma, o.s);
    const std::size_t order = a.size() - 1;
    if (m.history.size() < order) {
        throw Error(ErrorKind::Domain,
                    fmt::format("model history has {} values but the AR recursion needs {}", m.history.size(), order));
    }
    double ar1 = 1.0;
    for (double v : m.arma.ar) ar1 -= v;
    double sar1 = 1.0;
    for (double v : m.arma.seasonal_ar) sar1 -= v;
    const double constant = m.mean * ar1 * sar1;

    const std::size_t n = m.history.size();
    std::vector<double> y = m.history;
    std::vector<double> e(n, 0.0);
    const std::size_t nres = std::min(m.residuals.size(), n);
    std::copy(m.residuals.end() - static_cast<std::ptrdiff_t>(nres), m.residuals.end(),
              e.end() - static_cast<std::ptrdiff_t>(nres));

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const std::size_t t = y.size();
        double v = constant;
        for (std::size_t i = 1; i < a.size(); ++i) v -= a[i] * y[t - i];
        for (std::size_t j = 1; j < b.size() && j <= t; ++j) v += b[j] * e[t - j];
        y.push_back(v);
        e.push_back(0.0);
        out.push_back(v);
    }
    return out;
}

std::vector<double> holt_points(const FittedModel& m, int horizon) {
    const auto& p = std::get<HoltParams>(m.spec);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    double damp_sum = 0.0;
    double damp = 1.0;
    for (int h = 1; h <= horizon; ++h) {
        damp *= p.phi;
        damp_sum += damp;
        double v = m.state.level + damp_sum * m.state.trend;
        if (!m.state.seasonal.empty()) v += m.state.seasonal[static_cast<std::size_t>(h - 1) % m.state.seasonal.size()];
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<double> point_forecast(const FittedModel& model, int horizon) {
    if (horizon < 1) throw Error(ErrorKind::Domain, fmt::format("forecast horizon must be >= 1, got {}", horizon));
    return model.family == ModelFamily::HoltWinters ? holt_points(model, horizon) : arima_points(model, horizon);
}

std::vector<double> psi_weights(const FittedModel& model, int count) {
    const auto o = model.sarima_order();
    const auto a = integrated_ar_poly(model);
    const auto b = detail::expanded_ma_poly(model.arma, o.s);
    std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        double v = j == 0 ? 1.0 : (j < b.size() ? b[j] : 0.0);
        for (std::size_t i = 1; i < a.size() && i <= j; ++i) v -= a[i] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

ForecastPath forecast(const FittedModel& model, int horizon, double level, std::uint64_t seed) {
    const double z = normal_quantile_two_sided(level);
    ForecastPath path;
    path.start_year = model.end_year() + 1;
    path.level = level;
    path.points = point_forecast(model, horizon);
    const auto H = static_cast<std::size_t>(horizon);
    path.lower.resize(H);
    path.upper.resize(H);

    if (model.family != ModelFamily::HoltWinters) {
        const auto psi = psi_weights(model, horizon);
        double acc = 0.0;
        for (std::size_t h = 0; h < H; ++h) {
            acc += psi[h] * psi[h];
            const double half = z * std::sqrt(model.sigma2 * acc);
            path.lower[h] = path.points[h] - half;
            path.upper[h] = path.points[h] + half;
        }
        return path;
    }

    const auto& p = std::get<HoltParams>(model.spec);
    const double sigma = std::sqrt(model.sigma2);
    GaussianRng rng(seed);
    std::vector<std::vector<double>> draws(H, std::vector<double>(kHoltSimulationPaths));
    for (int k = 0; k < kHoltSimulationPaths; ++k) {
        double level_s = model.state.level;
        double trend_s = model.state.trend;
        auto season = model.state.seasonal;
        for (std::size_t h = 0; h < H; ++h) {
            const double s0 = season.empty() ? 0.0 : season.front();
            const double e = sigma * rng.normal();
            const double y = level_s + p.phi * trend_s + s0 + e;
            level_s = level_s + p.phi * trend_s + p.alpha * e;
            trend_s = p.phi * trend_s + p.alpha * p.beta * e;
            if (!season.empty()) {
                season.erase(season.begin());
                season.push_back(s0 + p.gamma * (1.0 - p.alpha) * e);
            }
            draws[h][static_cast<std::size_t>(k)] = y;
        }
    }
    const double tail = (1.0 - level) / 2.0;
    for (std::size_t h = 0; h < H; ++h) {
        path.lower[h] = std::min(quantile_type7(draws[h], tail), path.points[h]);
        path.upper[h] = std::max(quantile_type7(draws[h], 1.0 - tail), path.points[h]);
    }
    return path;
}

std::vector<double> simulate_arma(const ArimaOrder& order, const ArmaCoefficients& coefficients, double sigma, int n,
                                  std::uint64_t seed) {
    if (!coefficients.seasonal_ar.empty() || !coefficients.seasonal_ma.empty()) {
        throw Error(ErrorKind::Domain, "simulate_arma takes no seasonal coefficients; use simulate_sarima");
    }
    return simulate_sarima(SarimaOrder{order, 0, 0, 0, 1}, coefficients, sigma, n, seed);
}

std::vector<double> simulate_sarima(const SarimaOrder& order, const ArmaCoefficients& c, double sigma, int n,
                                    std::uint64_t seed) {
    order.validate();
    if (n < 1) throw Error(ErrorKind::Domain, "simulation length must be >= 1");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::Domain, "innovation sigma must be non-negative");
    const auto check_len = [](const std::vector<double>& v, int expected, const char* what) {
        if (static_cast<int>(v.size()) != expected) {
            throw Error(ErrorKind::Domain, fmt::format("{} has {} coefficients, order needs {}", what, v.size(), expected));
        }
    };
    check_len(c.ar, order.base.p, "AR");
    check_len(c.ma, order.base.q, "MA");
    check_len(c.seasonal_ar, order.P, "seasonal AR");
    check_len(c.seasonal_ma, order.Q, "seasonal MA");
    if (!is_stationary(c.ar) || !is_stationary(c.seasonal_ar)) {
        throw Error(ErrorKind::Domain, "AR coefficients are not stationary");
    }
    if (!is_invertible(c.ma) || !is_invertible(c.seasonal_ma)) {
        throw Error(ErrorKind::Domain, "MA coefficients are not invertible");
    }

    constexpr int kBurnIn = 100;
    const auto a = detail::expanded_ar_poly(c, order.s);
    const auto b = detail::expanded_ma_poly(c, order.s);
    const auto total = static_cast<std::size_t>(n + kBurnIn);
    std::vector<double> x(total, 0.0);
    std::vector<double> e(total, 0.0);
    GaussianRng rng(seed);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = sigma * rng.normal();
        double v = e[t];
        for (std::size_t i = 1; i < a.size() && i <= t; ++i) v -= a[i] * x[t - i];
        for (std::size_t j = 1; j < b.size() && j <= t; ++j) v += b[j] * e[t - j];
        x[t] = v;
    }
    std::vector<double> out(x.begin() + kBurnIn, x.end());
    for (int k = 0; k < order.D; ++k) {
        for (std::size_t t = static_cast<std::size_t>(order.s); t < out.size(); ++t) out[t] += out[t - static_cast<std::size_t>(order.s)];
    }
    for (int k = 0; k < order.base.d; ++k) {
        for (std::size_t t = 1; t < out.size(); ++t) out[t] += out[t - 1];
    }
    return out;
}

}  // namespace co2cast
