#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "co2cast/series.hpp"

namespace co2cast {

enum class ModelFamily { Arima, Sarima, HoltWinters };

std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view text);

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    /// d <= 2, 0 <= p, q <= 5. Throws Domain.
    void validate() const;
    auto operator<=>(const ArimaOrder&) const = default;
};

struct SarimaOrder {
    ArimaOrder base;
    int P = 0;
    int D = 0;
    int Q = 0;
    int s = 1;

    /// s >= 1; s == 1 forces P = D = Q = 0; D <= 1; P, Q <= 5. Throws Domain.
    void validate() const;
    auto operator<=>(const SarimaOrder&) const = default;
};

struct HoltParams {
    double alpha = 0.5;  // (0, 1)
    double beta = 0.1;   // [0, 1)
    double phi = 1.0;    // (0, 1]; 1 is an undamped trend
    int seasonal_period = 1;
    double gamma = 0.0;  // [0, 1), ignored without a season

    void validate() const;
    bool operator==(const HoltParams&) const = default;
};

/// Search settings for fit_holt_winters when parameters are estimated. The
/// damping grid is tried first; a continuous damping search in
/// (phi_min, 1) follows, and earlier candidates win exact ties.
struct HoltSearch {
    int seasonal_period = 1;
    std::vector<double> phi_grid = {1.0, 0.98, 0.9, 0.8};
    double phi_min = 0.8;
};

struct ArmaCoefficients {
    std::vector<double> ar;
    std::vector<double> ma;
    std::vector<double> seasonal_ar;
    std::vector<double> seasonal_ma;

    bool operator==(const ArmaCoefficients&) const = default;
};

/// Final smoothing states. seasonal[k] is the additive index for the
/// (k+1)-th period after the end of the data, cycling with the period.
struct HoltState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;

    bool operator==(const HoltState&) const = default;
};

using ModelSpec = std::variant<ArimaOrder, SarimaOrder, HoltParams>;

/// An estimated model, immutable once returned by a fit routine.
struct FittedModel {
    ModelFamily family = ModelFamily::Arima;
    ModelSpec spec;
    ArmaCoefficients arma;
    HoltState state;
    /// Intercept of the differenced series for the ARIMA family.
    double mean = 0.0;
    double sigma2 = 0.0;
    int n_obs = 0;
    double loglik = 0.0;
    double aic = 0.0;
    /// In-sample one-step errors, aligned with the end of history.
    std::vector<double> residuals;
    std::vector<double> history;
    int start_year = 0;
    bool converged = true;

    /// ARIMA specs are promoted to a seasonal order with s = 1.
    SarimaOrder sarima_order() const;
    int end_year() const { return start_year + static_cast<int>(history.size()) - 1; }
};

struct ForecastPath {
    int start_year = 0;
    std::vector<double> points;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.95;
};

struct FitOptions {
    int starts = 5;
    double tolerance = 1e-8;
    int max_iterations = 500;
};

/// Conditional-sum-of-squares ARIMA with intercept. The intercept is
/// profiled out in closed form; AR and MA blocks are searched through the
/// partial-autocorrelation parameterization.
FittedModel fit_arima(const AnnualSeries& series, const ArimaOrder& order, const FitOptions& options = {});

/// Multiplicative seasonal ARIMA by CSS. With s = 1 the arithmetic is
/// identical to fit_arima.
FittedModel fit_sarima(const AnnualSeries& series, const SarimaOrder& order, const FitOptions& options = {});

FittedModel fit_holt_winters(const AnnualSeries& series, const HoltParams& params);
FittedModel fit_holt_winters(const AnnualSeries& series, const HoltSearch& search, const FitOptions& options = {});

/// Point forecasts only (no interval work).
std::vector<double> point_forecast(const FittedModel& model, int horizon);

/// Point forecasts with prediction intervals at `level`. ARIMA-family bounds
/// come from psi weights; Holt-Winters bounds from 1000 simulated paths
/// seeded by `seed`.
ForecastPath forecast(const FittedModel& model, int horizon, double level = 0.95, std::uint64_t seed = 0);

/// Number of simulated paths behind Holt-Winters intervals.
inline constexpr int kHoltSimulationPaths = 1000;

/// First `count` psi weights of the model on the original (undifferenced)
/// scale; psi[0] = 1.
std::vector<double> psi_weights(const FittedModel& model, int count);

/// Two-sided standard normal quantile z such that P(|Z| <= z) = level.
double normal_quantile_two_sided(double level);

/// True when 1 - sum ar_i z^i has all roots outside the unit circle.
bool is_stationary(std::span<const double> ar);
/// True when 1 + sum ma_j z^j has all roots outside the unit circle.
bool is_invertible(std::span<const double> ma);

/// Zero-mean Gaussian ARMA path integrated d times, after 100 burn-in draws.
std::vector<double> simulate_arma(const ArimaOrder& order, const ArmaCoefficients& coefficients, double sigma, int n,
                                  std::uint64_t seed);
std::vector<double> simulate_sarima(const SarimaOrder& order, const ArmaCoefficients& coefficients, double sigma,
                                    int n, std::uint64_t seed);

}  // namespace co2cast
