#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "co2cast/config.hpp"
#include "co2cast/pipeline.hpp"

namespace co2cast {

inline constexpr int kReportSchemaVersion = 1;

/// Every setting except out_dir, so reports compare equal across output
/// locations.
nlohmann::ordered_json config_echo(const PipelineConfig& config);

nlohmann::ordered_json report_to_json(const PipelineResult& result, const PipelineConfig& config);

/// report.json plus forecast_<ISO3>.csv and benchmark_<ISO3>.csv per country.
/// Returns the written paths. Throws Error{Io}.
std::vector<std::filesystem::path> emit_report(const PipelineResult& result, const PipelineConfig& config,
                                               const std::filesystem::path& out_dir);

std::string forecast_csv(const AnnualSeries& history, const ForecastPath& forecast);
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);

/// Standalone SVG: history line, forecast line, interval band and a rule at
/// the history/forecast boundary on a 900x500 canvas.
std::string render_svg(const AnnualSeries& history, const ForecastPath* forecast);

/// One plot_<ISO3>.svg per country under out_dir/plots.
std::vector<std::filesystem::path> emit_plots(const PipelineResult& result, const std::filesystem::path& out_dir);

/// Fitted winners as out_dir/models/model_<ISO3>.json.
std::vector<std::filesystem::path> emit_models(const PipelineResult& result, const std::filesystem::path& out_dir);

struct PersistedModel {
    std::string country;
    FittedModel model;
};

/// Reads every model_<ISO3>.json under out_dir/models, ordered by country.
std::vector<PersistedModel> load_models(const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace co2cast
