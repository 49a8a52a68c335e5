#include "co2cast/pipeline.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/ingest.hpp"

namespace co2cast {

std::uint64_t country_seed(std::uint64_t run_seed, const std::string& country) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : country) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return run_seed ^ h;
}

namespace {

struct StageError {
    std::string stage;
    std::string message;
};

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageError{name, e.what()};
    } catch (const std::exception& e) {
        throw StageError{name, e.what()};
    }
}

PreprocessSummary summarize_preprocessing(AnnualSeries& series) {
    PreprocessSummary out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (has_flag(series.flags[i], ObsFlag::Interpolated)) out.interpolated_years.push_back(series.year_at(i));
    }
    if (series.size() >= 4) {
        for (auto method : {OutlierMethod::Zscore, OutlierMethod::Iqr}) {
            const auto report = detect_outliers(series, method);
            series = annotate_outliers(series, report);
            for (std::size_t k = 0; k < report.indices.size(); ++k) {
                out.outliers.push_back({series.year_at(report.indices[k]), method, report.scores[k]});
            }
        }
        std::sort(out.outliers.begin(), out.outliers.end(), [](const OutlierEntry& a, const OutlierEntry& b) {
            return a.year != b.year ? a.year < b.year : a.method < b.method;
        });
    }

    const auto diffs = series.size() > 1 ? difference(series.values, 1) : std::vector<double>{};
    try {
        out.adf = adf_test(diffs, std::nullopt, AdfRegression::Constant);
    } catch (const Error& e) {
        out.adf_note = e.what();
    }
    try {
        out.kpss = kpss_test(diffs, KpssRegression::Level);
    } catch (const Error& e) {
        out.kpss_note = e.what();
    }
    return out;
}

HistoryStats history_stats(const AnnualSeries& series, const PopulationSeries* population) {
    HistoryStats h;
    h.first_year = series.start_year;
    h.last_year = series.end_year();
    if (series.size() >= 2) {
        h.cagr_pct = cagr(series.values.front(), series.values.back(), h.last_year - h.first_year);
    }
    h.cumulative_mt = cumulative(series, h.first_year, h.last_year);
    if (population) {
        try {
            const auto pc = per_capita(series, *population);
            h.per_capita_first = pc.values.front().tonnes_per_person;
            h.per_capita_last = pc.values.back().tonnes_per_person;
        } catch (const Error&) {
            // No overlapping years: per-capita endpoints stay empty.
        }
    }
    return h;
}

CountryReport process_country(const PipelineConfig& config, const PipelineOptions& options, const AnnualSeries& raw,
                              const EnergyMixTable* mix, const PopulationSeries* population) {
    CountryReport r;
    r.country = raw.country;

    r.history = stage("preprocess", [&] { return interpolate_missing(raw); });
    r.preprocessing = stage("preprocess", [&] { return summarize_preprocessing(r.history); });

    stage("classify", [&] {
        if (!mix) throw Error(ErrorKind::Validation, "no energy-mix data for this country");
        r.indices = compute_indices(*mix);
        r.classification = classify(r.indices, config.thresholds);
        return 0;
    });

    r.history_stats = stage("history_stats", [&] { return history_stats(r.history, population); });

    GridSearchOptions gs;
    gs.train_fraction = config.train_fraction;
    gs.cv_horizon = config.cv_horizon;
    gs.threads = config.threads;
    const auto& g = config.grids;
    const std::vector<std::pair<ModelFamily, std::vector<ModelConfig>>> grids = {
        {ModelFamily::Arima, arima_grid(g.arima_p, g.arima_d, g.arima_q)},
        {ModelFamily::Sarima, sarima_grid(g.arima_p, g.arima_d, g.arima_q, g.sarima_P, g.sarima_D, g.sarima_Q,
                                          config.sarima_seasonal_period)},
        {ModelFamily::HoltWinters, holt_grid(g.holt_step, g.holt_phi)},
    };
    std::vector<BenchmarkRow> rows;
    for (const auto& [family, grid] : grids) {
        rows.push_back(stage("benchmark", [&] { return grid_search(r.history, family, grid, gs); }));
    }
    r.benchmark = select_best(std::move(rows));

    if (options.forecast) {
        r.selected_model = stage("refit", [&] { return fit_model(r.history, r.selected().config); });
        const int horizon = config.forecast_end_year - r.history.end_year();
        r.forecast = stage("forecast", [&] {
            return forecast(*r.selected_model, horizon, config.interval_level,
                            country_seed(config.rng_seed, r.country));
        });
    }
    return r;
}

template <typename T>
std::map<std::string, const T*> index_by_country(const std::vector<T>& items) {
    std::map<std::string, const T*> out;
    for (const auto& item : items) out[item.country] = &item;
    return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
    config.validate();
    const auto emissions = load_emissions_csv(config.emissions_path);
    const auto energy = load_energy_csv(config.energy_path, config.energy_mode);
    std::vector<PopulationSeries> population;
    if (config.population_path) population = load_population_csv(*config.population_path);

    const auto emissions_by = index_by_country(emissions);
    const auto energy_by = index_by_country(energy);
    const auto population_by = index_by_country(population);

    std::vector<std::string> wanted = config.countries;
    if (wanted.empty()) {
        for (const auto& [code, _] : emissions_by) wanted.push_back(code);
    }
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    for (const auto& code : wanted) {
        const auto it = emissions_by.find(code);
        if (it != emissions_by.end() && config.forecast_end_year <= it->second->end_year()) {
            throw Error(ErrorKind::Config,
                        fmt::format("forecast_end_year {} must be after the last historical year {} of {}",
                                    config.forecast_end_year, it->second->end_year(), code));
        }
    }

    PipelineResult result;
    for (const auto& code : wanted) {
        const auto it = emissions_by.find(code);
        if (it == emissions_by.end()) {
            result.errors.push_back({code, "ingest", "country not present in the emissions file"});
            continue;
        }
        const auto mix = energy_by.find(code);
        const auto pop = population_by.find(code);
        try {
            result.countries.push_back(process_country(config, options, *it->second,
                                                       mix == energy_by.end() ? nullptr : mix->second,
                                                       pop == population_by.end() ? nullptr : pop->second));
        } catch (const StageError& e) {
            result.errors.push_back({code, e.stage, e.message});
        }
    }

    if (result.errors.empty()) {
        result.status = ExitStatus::Success;
    } else if (result.countries.empty()) {
        result.status = ExitStatus::TotalFailure;
    } else {
        result.status = ExitStatus::Partial;
    }
    return result;
}

}  // namespace co2cast
