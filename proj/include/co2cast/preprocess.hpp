#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "co2cast/series.hpp"

namespace co2cast {

// ---------------------------------------------------------------------------
// Gap filling and outlier diagnostics
// ---------------------------------------------------------------------------

/// Fills interior gaps by linear interpolation between the nearest known
/// neighbours; filled positions gain the Interpolated flag (Missing cleared).
/// Throws UnfillableGap when a gap touches either end of the series.
AnnualSeries interpolate_missing(const AnnualSeries& series);

enum class OutlierMethod { Zscore, Iqr };

std::string_view to_string(OutlierMethod method);

struct OutlierOptions {
    double zscore_threshold = 3.0;
    double iqr_multiplier = 1.5;
};

struct OutlierReport {
    OutlierMethod method = OutlierMethod::Zscore;
    std::vector<std::size_t> indices;
    /// z-score for Zscore; signed distance beyond the nearest fence in IQR
    /// units for Iqr.
    std::vector<double> scores;
    /// |z| cut for Zscore; the (lower, upper) fences for Iqr.
    double threshold = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
};

/// Flags only; the series is never modified. Requires at least 4 points and
/// no gaps.
OutlierReport detect_outliers(const AnnualSeries& series, OutlierMethod method, const OutlierOptions& options = {});

/// Returns a copy of series with the report's flags set.
AnnualSeries annotate_outliers(const AnnualSeries& series, const OutlierReport& report);

/// Linear-interpolation quantile between order statistics (R type 7).
double quantile_type7(std::span<const double> values, double prob);

/// d-fold first differencing; output length is input length - d.
std::vector<double> difference(std::span<const double> values, int d);

// ---------------------------------------------------------------------------
// Stationarity tests
// ---------------------------------------------------------------------------

enum class StationarityTest { Adf, Kpss };

enum class AdfRegression { Constant, ConstantAndTrend };
enum class KpssRegression { Level, Trend };

enum class Decision { RejectNull, FailToReject };

std::string_view to_string(StationarityTest t);
std::string_view to_string(Decision d);

struct CriticalValue {
    double significance = 0.0;
    double threshold = 0.0;
};

struct StationarityResult {
    StationarityTest test = StationarityTest::Adf;
    double statistic = 0.0;
    /// Ordered 0.01, 0.05, 0.10.
    std::vector<CriticalValue> critical_values;
    double p_value_low = 0.0;
    double p_value_high = 1.0;
    Decision decision_at_5pct = Decision::FailToReject;
    int lags = 0;
    int nobs = 0;

    double critical_at(double significance) const;
};

/// floor((n - 1)^(1/3)).
int default_adf_lag(std::size_t n);

/// Augmented Dickey-Fuller test (null: unit root). Critical values come from
/// MacKinnon's (2010) response surfaces evaluated at the regression sample
/// size; the p-value is the band bracketed by the tabulated levels.
StationarityResult adf_test(std::span<const double> values, std::optional<int> lag_order = std::nullopt,
                            AdfRegression regression = AdfRegression::Constant);

/// KPSS test (null: level or trend stationarity) with a Bartlett-kernel
/// Newey-West long-run variance and bandwidth floor(4 (n/100)^0.25).
StationarityResult kpss_test(std::span<const double> values, KpssRegression regression = KpssRegression::Level);

}  // namespace co2cast
