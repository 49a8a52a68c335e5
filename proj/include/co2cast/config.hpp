#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "co2cast/energymix.hpp"
#include "co2cast/ingest.hpp"

namespace co2cast {

struct GridConfig {
    std::vector<int> arima_p{0, 1, 2};
    std::vector<int> arima_d{0, 1, 2};
    std::vector<int> arima_q{0, 1, 2};
    std::vector<int> sarima_P{0, 1, 2};
    std::vector<int> sarima_D{0, 1};
    std::vector<int> sarima_Q{0, 1, 2};
    double holt_step = 0.05;
    std::vector<double> holt_phi{0.8, 0.9, 0.98, 1.0};
};

struct PipelineConfig {
    std::filesystem::path emissions_path;
    std::filesystem::path energy_path;
    std::optional<std::filesystem::path> population_path;
    EnergyMode energy_mode = EnergyMode::Shares;
    std::vector<std::string> countries;  // empty: every country in the emissions file
    double train_fraction = 0.8;
    int forecast_end_year = 2060;
    double interval_level = 0.95;
    int sarima_seasonal_period = 1;
    GridConfig grids;
    ClassifyThresholds thresholds;
    std::uint64_t rng_seed = 42;
    int cv_horizon = 1;
    int threads = 1;
    std::filesystem::path out_dir = "out";

    /// Checks everything that does not need the input data. Throws Config.
    void validate() const;
};

/// Applies one `key = value` setting. Relative paths are resolved against
/// base_dir. Throws Config on an unknown key or a bad value.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

/// Reads a flat key-value file (`key = value`, `#` comments) on top of the
/// defaults.
PipelineConfig load_config_file(const std::filesystem::path& path);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

}  // namespace co2cast
