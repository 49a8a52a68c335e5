#pragma once

#include <optional>
#include <string>
#include <vector>

#include "co2cast/config.hpp"
#include "co2cast/energymix.hpp"
#include "co2cast/evaluation.hpp"
#include "co2cast/models.hpp"
#include "co2cast/preprocess.hpp"

namespace co2cast {

struct OutlierEntry {
    int year = 0;
    OutlierMethod method = OutlierMethod::Zscore;
    double score = 0.0;
};

struct PreprocessSummary {
    std::vector<int> interpolated_years;
    std::vector<OutlierEntry> outliers;
    /// Tests run on the first-differenced series; empty with a note when the
    /// series is too short or degenerate.
    std::optional<StationarityResult> adf;
    std::optional<StationarityResult> kpss;
    std::string adf_note;
    std::string kpss_note;
};

struct HistoryStats {
    int first_year = 0;
    int last_year = 0;
    double cagr_pct = 0.0;
    double cumulative_mt = 0.0;
    std::optional<double> per_capita_first;
    std::optional<double> per_capita_last;
};

struct CountryReport {
    std::string country;
    MixIndices indices;
    CountryCategory classification;
    PreprocessSummary preprocessing;
    HistoryStats history_stats;
    AnnualSeries history;                 // after interpolation and flagging
    std::vector<BenchmarkRow> benchmark;  // select_best order
    std::optional<FittedModel> selected_model;
    std::optional<ForecastPath> forecast;

    const BenchmarkRow& selected() const { return benchmark.front(); }
};

struct CountryError {
    std::string country;
    std::string stage;
    std::string message;
};

enum class ExitStatus : int { Success = 0, TotalFailure = 1, Partial = 2, ConfigError = 3 };

struct PipelineResult {
    std::vector<CountryReport> countries;  // ordered by country code
    std::vector<CountryError> errors;
    ExitStatus status = ExitStatus::Success;
};

struct PipelineOptions {
    /// Skip the refit and long-range forecast (benchmark-only runs).
    bool forecast = true;
};

/// Runs ingest -> interpolate/flag -> stationarity -> indices/classify ->
/// split -> per-family grid search -> select_best -> refit on the full
/// history -> forecast, country by country. Per-country failures land in
/// `errors`; file-level and config problems throw.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelineOptions& options = {});

/// Seed for a country's simulation draws, derived from the run seed.
std::uint64_t country_seed(std::uint64_t run_seed, const std::string& country);

}  // namespace co2cast
