#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "co2cast/models.hpp"
#include "co2cast/series.hpp"

namespace co2cast {

struct Metrics {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;            // percent
    std::optional<double> r2;     // empty when the actuals are constant
};

/// MAE, RMSE, MAPE (percent) and R^2 = 1 - SSE/SST, where SST is taken about
/// the mean of `actual` itself. A forecast worse than that mean has R^2 < 0.
Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted);

struct ChronoSplit {
    AnnualSeries train;
    AnnualSeries test;
};

/// train = first floor(fraction * n) observations, test = the rest.
ChronoSplit chrono_split(const AnnualSeries& series, double train_fraction);

/// Holt-Winters grid entry: fixed parameters, or estimated when empty.
struct HoltCandidate {
    std::optional<HoltParams> params;
    HoltSearch search;
};

using ModelConfig = std::variant<ArimaOrder, SarimaOrder, HoltCandidate>;

ModelFamily family_of(const ModelConfig& config);
int parameter_count(const ModelConfig& config);
std::string describe(const ModelConfig& config);
FittedModel fit_model(const AnnualSeries& series, const ModelConfig& config, const FitOptions& options = {});

std::vector<ModelConfig> arima_grid(const std::vector<int>& ps, const std::vector<int>& ds, const std::vector<int>& qs);
/// Combinations that violate SarimaOrder invariants (e.g. seasonal terms with
/// s = 1) are left out.
std::vector<ModelConfig> sarima_grid(const std::vector<int>& ps, const std::vector<int>& ds,
                                     const std::vector<int>& qs, const std::vector<int>& Ps,
                                     const std::vector<int>& Ds, const std::vector<int>& Qs, int s);
/// alpha, beta on the lattice step, 2 step, ... < 1; one entry per phi.
std::vector<ModelConfig> holt_grid(double step, const std::vector<double>& phis);

std::vector<ModelConfig> default_arima_grid();
std::vector<ModelConfig> default_sarima_grid(int s);
std::vector<ModelConfig> default_holt_grid();

struct CvFold {
    int train_end_year = 0;
    int horizon = 0;
    std::optional<Metrics> metrics;  // empty for a failed fold
    std::string error;
};

struct CvReport {
    std::vector<CvFold> folds;
    /// Unweighted mean over successful folds; r2 averages the folds where it
    /// is defined.
    std::optional<Metrics> aggregate;
    int failed_folds = 0;
};

/// Expanding-window backtest: one fold per origin t = min_train .. n - horizon.
CvReport rolling_origin_cv(const AnnualSeries& series, const ModelConfig& config, int min_train, int horizon,
                           const FitOptions& options = {});

struct ResidualDiagnostics {
    int ljung_box_lag = 0;
    double ljung_box_q = 0.0;
    double ljung_box_p = 1.0;
    bool residual_autocorrelation = false;  // p < 0.05
    bool divergent = false;                 // 10-step forecast > 3x last observation
};

/// Advisory checks; they never change a ranking.
ResidualDiagnostics residual_diagnostics(const FittedModel& model);

struct SkippedConfig {
    std::string config;
    std::string reason;
};

struct BenchmarkRow {
    ModelFamily family = ModelFamily::Arima;
    ModelConfig config;
    Metrics test_metrics;
    CvReport cv;
    ResidualDiagnostics diagnostics;
    std::vector<double> test_forecast;
    int configs_evaluated = 0;
    std::vector<SkippedConfig> skipped;
};

struct GridSearchOptions {
    double train_fraction = 0.8;
    /// Rolling-origin start for the winner's cv metrics; 0 means the train length.
    int cv_min_train = 0;
    int cv_horizon = 1;
    int threads = 1;
    FitOptions fit;
};

/// Fits every config on the chronological train segment and keeps the one
/// with the lowest test RMSE (ties: MAE, MAPE, fewer parameters, grid order).
/// Throws ExhaustiveFailure when no config can be fitted.
BenchmarkRow grid_search(const AnnualSeries& series, ModelFamily family, const std::vector<ModelConfig>& grid,
                         const GridSearchOptions& options = {});

/// Orders rows by test RMSE, then MAE, MAPE, parameter count, family.
std::vector<BenchmarkRow> select_best(std::vector<BenchmarkRow> rows);

}  // namespace co2cast
