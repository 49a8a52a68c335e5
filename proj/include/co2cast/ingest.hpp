#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "co2cast/series.hpp"

namespace co2cast {

enum class EnergyMode { Shares, Generation };

EnergyMode parse_energy_mode(std::string_view text);
std::string_view to_string(EnergyMode mode);

/// Share-sum tolerance for fossil + renewable + nuclear.
inline constexpr double kShareSumTolerance = 0.01;

enum class SourceGroup { Fossil, Renewable, Nuclear };

/// Maps a source label (coal, oil, gas, nuclear, hydro, solar, wind,
/// bioenergy, geothermal, other_renewable) to its group; throws Parse on an
/// unknown label.
SourceGroup source_group(std::string_view label);

// Loaders return one object per country, sorted by country code. The stream
// overloads take a name used in error messages.

std::vector<AnnualSeries> load_emissions_csv(const std::filesystem::path& path);
std::vector<AnnualSeries> parse_emissions_csv(std::istream& in, std::string_view source_name);

std::vector<EnergyMixTable> load_energy_csv(const std::filesystem::path& path, EnergyMode mode);
std::vector<EnergyMixTable> parse_energy_csv(std::istream& in, EnergyMode mode, std::string_view source_name);

std::vector<PopulationSeries> load_population_csv(const std::filesystem::path& path);
std::vector<PopulationSeries> parse_population_csv(std::istream& in, std::string_view source_name);

/// Writes series in the emissions schema. Gap years are omitted, so the
/// output loads back to an identical object.
void write_emissions_csv(std::ostream& out, const std::vector<AnnualSeries>& series);

}  // namespace co2cast
