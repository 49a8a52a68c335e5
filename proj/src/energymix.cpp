#include "co2cast/energymix.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "co2cast/error.hpp"

namespace co2cast {

std::string_view to_string(CountryLabel label) {
    switch (label) {
        case CountryLabel::FossilDependent: return "FossilDependent";
        case CountryLabel::TransitionPhase: return "TransitionPhase";
        case CountryLabel::RenewableAccelerated: return "RenewableAccelerated";
    }
    return "Unknown";
}

MixIndices compute_indices(const EnergyMixTable& mix) {
    if (mix.rows.empty()) {
        throw Error(ErrorKind::Domain, fmt::format("energy mix for {} has no rows", mix.country));
    }
    MixIndices out;
    out.country = mix.country;
    // Sum in year order so the averages do not depend on row order.
    std::map<int, MixRow> by_year;
    for (const auto& r : mix.rows) by_year[r.year] = r;
    for (const auto& [year, r] : by_year) {
        out.yearly.push_back({year, r.fossil, r.renewable, r.nuclear});
        out.avg_fossil += r.fossil;
        out.avg_renewable += r.renewable;
    }
    const double n = static_cast<double>(out.yearly.size());
    out.avg_fossil /= n;
    out.avg_renewable /= n;
    return out;
}

CountryCategory classify(const MixIndices& indices, const ClassifyThresholds& thresholds) {
    const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(indices.avg_fossil) || !in_unit(indices.avg_renewable)) {
        throw Error(ErrorKind::Domain, "mix averages must lie in [0, 1]");
    }
    CountryCategory c;
    c.avg_fossil = indices.avg_fossil;
    c.avg_renewable = indices.avg_renewable;
    c.thresholds = thresholds;
    if (indices.avg_renewable >= thresholds.renewable) {
        c.label = CountryLabel::RenewableAccelerated;
    } else if (indices.avg_fossil >= thresholds.fossil) {
        c.label = CountryLabel::FossilDependent;
    } else {
        c.label = CountryLabel::TransitionPhase;
    }
    return c;
}

double cagr(double first_value, double last_value, int n_years) {
    if (!(first_value > 0.0)) throw Error(ErrorKind::Domain, "CAGR needs a positive first value");
    if (n_years < 1) throw Error(ErrorKind::Domain, "CAGR needs a span of at least one year");
    if (last_value < 0.0) throw Error(ErrorKind::Domain, "CAGR needs a non-negative last value");
    return 100.0 * (std::pow(last_value / first_value, 1.0 / n_years) - 1.0);
}

double cumulative(const AnnualSeries& series, int from_year, int to_year) {
    if (to_year < from_year || from_year < series.start_year || to_year > series.end_year()) {
        throw Error(ErrorKind::Domain, fmt::format("range {}-{} is outside {}-{}", from_year, to_year,
                                                   series.start_year, series.end_year()));
    }
    double total = 0.0;
    for (int y = from_year; y <= to_year; ++y) {
        const auto i = static_cast<std::size_t>(y - series.start_year);
        if (has_flag(series.flags[i], ObsFlag::Missing)) {
            throw Error(ErrorKind::Domain, fmt::format("year {} is missing; interpolate first", y));
        }
        total += series.values[i];
    }
    return total;
}

PerCapitaResult per_capita(const AnnualSeries& series, const PopulationSeries& population) {
    std::map<int, double> pop;
    for (const auto& r : population.rows) pop[r.year] = r.population;
    PerCapitaResult out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (has_flag(series.flags[i], ObsFlag::Missing)) continue;
        const auto it = pop.find(series.year_at(i));
        if (it == pop.end()) {
            ++out.omitted_years;
            continue;
        }
        out.values.push_back({series.year_at(i), series.values[i] * 1e6 / it->second});
    }
    if (out.values.empty()) {
        throw Error(ErrorKind::Domain,
                    fmt::format("no overlapping years between emissions and population for {}", series.country));
    }
    return out;
}

}  // namespace co2cast
