#include "co2cast/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/model_json.hpp"
#include "detail/csv.hpp"

namespace co2cast {

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string csv_number(double v) { return std::isfinite(v) ? detail::format_double(v) : std::string{}; }

std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string{}; }

template <typename T>
json int_list(const std::vector<T>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x);
    return out;
}

json stationarity_json(const std::optional<StationarityResult>& r, const std::string& note) {
    if (!r) return json{{"available", false}, {"note", note}};
    json cv = json::object();
    for (const auto& c : r->critical_values) cv[fmt::format("{:g}%", c.significance * 100)] = number(c.threshold);
    return json{{"available", true},
                {"series", "first_difference"},
                {"statistic", number(r->statistic)},
                {"critical_values", cv},
                {"p_value_low", number(r->p_value_low)},
                {"p_value_high", number(r->p_value_high)},
                {"decision_at_5pct", std::string(to_string(r->decision_at_5pct))},
                {"lags", r->lags},
                {"nobs", r->nobs}};
}

json country_json(const CountryReport& c) {
    json out;
    out["country"] = c.country;
    out["classification"] = json{{"label", std::string(to_string(c.classification.label))},
                                 {"avg_fossil", number(c.classification.avg_fossil)},
                                 {"avg_renewable", number(c.classification.avg_renewable)}};

    json outliers = json::array();
    for (const auto& o : c.preprocessing.outliers) {
        outliers.push_back(
            json{{"year", o.year}, {"method", std::string(to_string(o.method))}, {"score", number(o.score)}});
    }
    out["preprocessing"] = json{{"interpolated_years", int_list(c.preprocessing.interpolated_years)},
                                {"outliers", outliers},
                                {"adf", stationarity_json(c.preprocessing.adf, c.preprocessing.adf_note)},
                                {"kpss", stationarity_json(c.preprocessing.kpss, c.preprocessing.kpss_note)}};

    const auto& h = c.history_stats;
    out["history_stats"] = json{{"first_year", h.first_year},
                                {"last_year", h.last_year},
                                {"cagr_pct", number(h.cagr_pct)},
                                {"cumulative_mt", number(h.cumulative_mt)},
                                {"per_capita_first", number(h.per_capita_first)},
                                {"per_capita_last", number(h.per_capita_last)}};

    json bench = json::array();
    for (const auto& row : c.benchmark) {
        bench.push_back(json{{"model", std::string(to_string(row.family))},
                             {"config", describe(row.config)},
                             {"mae", number(row.test_metrics.mae)},
                             {"rmse", number(row.test_metrics.rmse)},
                             {"r2", number(row.test_metrics.r2)},
                             {"mape", number(row.test_metrics.mape)}});
    }
    out["benchmark"] = bench;
    if (!c.benchmark.empty()) {
        out["selected"] = json{{"model", std::string(to_string(c.selected().family))},
                               {"config", describe(c.selected().config)}};
    } else {
        out["selected"] = nullptr;
    }

    json fc = json::array();
    if (c.forecast) {
        const auto& f = *c.forecast;
        for (std::size_t i = 0; i < f.points.size(); ++i) {
            fc.push_back(json{{"year", f.start_year + static_cast<int>(i)},
                              {"point", number(f.points[i])},
                              {"lower", number(f.lower[i])},
                              {"upper", number(f.upper[i])}});
        }
    }
    out["forecast"] = fc;
    return out;
}

}  // namespace

json config_echo(const PipelineConfig& config) {
    const auto& g = config.grids;
    return json{{"emissions", config.emissions_path.generic_string()},
                {"energy", config.energy_path.generic_string()},
                {"population", config.population_path ? json(config.population_path->generic_string()) : json(nullptr)},
                {"energy_mode", std::string(to_string(config.energy_mode))},
                {"countries", int_list(config.countries)},
                {"train_fraction", config.train_fraction},
                {"forecast_end_year", config.forecast_end_year},
                {"interval_level", config.interval_level},
                {"sarima_seasonal_period", config.sarima_seasonal_period},
                {"rng_seed", config.rng_seed},
                {"cv_horizon", config.cv_horizon},
                {"classify", json{{"fossil_threshold", config.thresholds.fossil},
                                  {"renewable_threshold", config.thresholds.renewable}}},
                {"grid", json{{"arima", json{{"p", int_list(g.arima_p)}, {"d", int_list(g.arima_d)},
                                             {"q", int_list(g.arima_q)}}},
                              {"sarima", json{{"P", int_list(g.sarima_P)}, {"D", int_list(g.sarima_D)},
                                              {"Q", int_list(g.sarima_Q)}}},
                              {"holt", json{{"step", g.holt_step}, {"phi", int_list(g.holt_phi)}}}}}};
}

json report_to_json(const PipelineResult& result, const PipelineConfig& config) {
    json out;
    out["schema_version"] = kReportSchemaVersion;
    out["config_echo"] = config_echo(config);
    json countries = json::array();
    for (const auto& c : result.countries) countries.push_back(country_json(c));
    out["countries"] = countries;
    json errors = json::array();
    for (const auto& e : result.errors) {
        errors.push_back(json{{"country", e.country}, {"stage", e.stage}, {"message", e.message}});
    }
    out["errors"] = errors;
    return out;
}

std::string forecast_csv(const AnnualSeries& history, const ForecastPath& forecast) {
    std::string out = "year,point,lower,upper,kind\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out += fmt::format("{},{},,,history\n", history.year_at(i), csv_number(history.values[i]));
    }
    for (std::size_t i = 0; i < forecast.points.size(); ++i) {
        out += fmt::format("{},{},{},{},forecast\n", forecast.start_year + static_cast<int>(i),
                           csv_number(forecast.points[i]), csv_number(forecast.lower[i]),
                           csv_number(forecast.upper[i]));
    }
    return out;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
    std::string out = "model,mae,rmse,r2,mape\n";
    for (const auto& r : rows) {
        const auto& m = r.test_metrics;
        out += fmt::format("{},{},{},{},{}\n", to_string(r.family), csv_number(m.mae), csv_number(m.rmse),
                           csv_number(m.r2), csv_number(m.mape));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot open {} for writing", path.string()));
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing {}", path.string()));
}

std::vector<std::filesystem::path> emit_report(const PipelineResult& result, const PipelineConfig& config,
                                               const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const auto report_path = out_dir / "report.json";
    write_text_file(report_path, report_to_json(result, config).dump(2) + "\n");
    written.push_back(report_path);
    for (const auto& c : result.countries) {
        if (c.forecast) {
            const auto p = out_dir / fmt::format("forecast_{}.csv", c.country);
            write_text_file(p, forecast_csv(c.history, *c.forecast));
            written.push_back(p);
        }
        const auto p = out_dir / fmt::format("benchmark_{}.csv", c.country);
        write_text_file(p, benchmark_csv(c.benchmark));
        written.push_back(p);
    }
    return written;
}

std::vector<std::filesystem::path> emit_plots(const PipelineResult& result, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& c : result.countries) {
        const auto p = out_dir / "plots" / fmt::format("plot_{}.svg", c.country);
        write_text_file(p, render_svg(c.history, c.forecast ? &*c.forecast : nullptr));
        written.push_back(p);
    }
    return written;
}

std::vector<std::filesystem::path> emit_models(const PipelineResult& result, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& c : result.countries) {
        if (!c.selected_model) continue;
        auto doc = model_to_json(*c.selected_model);
        json wrapped;
        wrapped["country"] = c.country;
        for (auto& [k, v] : doc.items()) wrapped[k] = v;
        const auto p = out_dir / "models" / fmt::format("model_{}.json", c.country);
        write_text_file(p, wrapped.dump(2) + "\n");
        written.push_back(p);
    }
    return written;
}

std::vector<PersistedModel> load_models(const std::filesystem::path& out_dir) {
    const auto dir = out_dir / "models";
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw Error(ErrorKind::Io, fmt::format("no persisted models under {}", dir.string()));
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("model_") && name.ends_with(".json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<PersistedModel> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read {}", f.string()));
        json doc;
        try {
            doc = json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::Parse, fmt::format("{}: {}", f.string(), e.what()));
        }
        if (!doc.contains("country") || !doc["country"].is_string()) {
            throw Error(ErrorKind::Parse, fmt::format("{}: missing country", f.string()));
        }
        out.push_back({doc["country"].get<std::string>(), model_from_json(doc)});
    }
    return out;
}

}  // namespace co2cast
