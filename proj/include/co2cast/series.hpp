#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace co2cast {

/// Per-observation annotations. Stored as a bit set so an observation can be
/// both interpolated and flagged by an outlier rule.
enum class ObsFlag : std::uint8_t {
    None = 0,
    Missing = 1 << 0,
    Interpolated = 1 << 1,
    OutlierZscore = 1 << 2,
    OutlierIqr = 1 << 3,
};

using FlagSet = std::uint8_t;

constexpr FlagSet flag_bit(ObsFlag f) { return static_cast<FlagSet>(f); }
constexpr bool has_flag(FlagSet set, ObsFlag f) { return (set & flag_bit(f)) != 0; }

/// One country's consecutive annual emissions (Mt CO2). Interior gaps are
/// stored as NaN with the Missing flag until preprocessing fills them.
struct AnnualSeries {
    std::string country;
    int start_year = 0;
    std::vector<double> values;
    std::vector<FlagSet> flags;

    std::size_t size() const { return values.size(); }
    int end_year() const { return start_year + static_cast<int>(values.size()) - 1; }
    int year_at(std::size_t i) const { return start_year + static_cast<int>(i); }
    bool has_gaps() const;

    /// Throws Error{Validation} when an invariant does not hold.
    void validate() const;

    /// Build a gap-free series with empty flags.
    static AnnualSeries from_values(std::string country, int start_year, std::vector<double> values);

    /// Sub-series [first, first + count).
    AnnualSeries slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const AnnualSeries& a, const AnnualSeries& b);
};

struct MixRow {
    int year = 0;
    double fossil = 0.0;
    double renewable = 0.0;
    double nuclear = 0.0;

    friend bool operator==(const MixRow&, const MixRow&) = default;
};

struct EnergyMixTable {
    std::string country;
    std::vector<MixRow> rows;

    friend bool operator==(const EnergyMixTable&, const EnergyMixTable&) = default;
};

struct PopulationRow {
    int year = 0;
    double population = 0.0;

    friend bool operator==(const PopulationRow&, const PopulationRow&) = default;
};

struct PopulationSeries {
    std::string country;
    std::vector<PopulationRow> rows;

    friend bool operator==(const PopulationSeries&, const PopulationSeries&) = default;
};

/// ISO-3 style code: exactly three ASCII uppercase letters.
bool is_valid_country_code(const std::string& code);

}  // namespace co2cast
