#pragma once

#include <string_view>
#include <vector>

#include "co2cast/series.hpp"

namespace co2cast {

struct YearIndices {
    int year = 0;
    double fossil = 0.0;
    double renewable = 0.0;
    double nuclear = 0.0;
};

struct MixIndices {
    std::string country;
    std::vector<YearIndices> yearly;
    double avg_fossil = 0.0;
    double avg_renewable = 0.0;
};

enum class CountryLabel { FossilDependent, TransitionPhase, RenewableAccelerated };

std::string_view to_string(CountryLabel label);

/// Cut-offs for the three archetypes. Renewable is checked first.
struct ClassifyThresholds {
    double fossil = 0.80;
    double renewable = 0.50;
};

struct CountryCategory {
    CountryLabel label = CountryLabel::TransitionPhase;
    double avg_fossil = 0.0;
    double avg_renewable = 0.0;
    ClassifyThresholds thresholds;
};

/// Fossil-dominance and renewable-penetration indices per year plus their
/// averages. Throws Domain on an empty table.
MixIndices compute_indices(const EnergyMixTable& mix);

/// RenewableAccelerated iff avg_renewable >= renewable threshold, else
/// FossilDependent iff avg_fossil >= fossil threshold, else TransitionPhase.
CountryCategory classify(const MixIndices& indices, const ClassifyThresholds& thresholds = {});

/// Compound annual growth rate in percent per year over `n_years` (the year
/// span between the two observations).
double cagr(double first_value, double last_value, int n_years);

/// Inclusive sum over [from_year, to_year].
double cumulative(const AnnualSeries& series, int from_year, int to_year);

struct PerCapitaValue {
    int year = 0;
    double tonnes_per_person = 0.0;
};

struct PerCapitaResult {
    std::vector<PerCapitaValue> values;
    /// Emission years without a population entry.
    int omitted_years = 0;
};

/// Mt * 1e6 / persons for every year present in both inputs.
PerCapitaResult per_capita(const AnnualSeries& series, const PopulationSeries& population);

}  // namespace co2cast
