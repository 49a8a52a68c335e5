#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "co2cast/config.hpp"
#include "co2cast/energymix.hpp"
#include "co2cast/error.hpp"
#include "co2cast/ingest.hpp"
#include "co2cast/pipeline.hpp"
#include "co2cast/report.hpp"

namespace fs = std::filesystem;
using namespace co2cast;

namespace {

struct Flags {
    std::string config;
    std::string emissions;
    std::string energy;
    std::string population;
    std::string energy_mode;
    std::vector<std::string> countries;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> end_year;
    std::optional<double> level;
    std::optional<int> threads;
};

void add_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "key = value config file");
    cmd.add_option("--emissions", f.emissions, "emissions CSV (country,year,emissions_mt)");
    cmd.add_option("--energy", f.energy, "energy-mix CSV (country,year,source,value)");
    cmd.add_option("--population", f.population, "population CSV (country,year,population)");
    cmd.add_option("--energy-mode", f.energy_mode, "shares or generation");
    cmd.add_option("--country", f.countries, "ISO-3 code; repeat to select several");
    cmd.add_option("--out-dir", f.out_dir, "output directory");
    cmd.add_option("--seed", f.seed, "RNG seed");
    cmd.add_option("--end-year", f.end_year, "last forecast year");
    cmd.add_option("--level", f.level, "prediction interval level");
    cmd.add_option("--threads", f.threads, "grid-search worker threads");
}

PipelineConfig build_config(const Flags& f) {
    PipelineConfig c;
    if (!f.config.empty()) apply_config_file(c, f.config);
    if (!f.emissions.empty()) c.emissions_path = f.emissions;
    if (!f.energy.empty()) c.energy_path = f.energy;
    if (!f.population.empty()) c.population_path = fs::path(f.population);
    if (!f.energy_mode.empty()) c.energy_mode = parse_energy_mode(f.energy_mode);
    if (!f.countries.empty()) c.countries = f.countries;
    if (!f.out_dir.empty()) c.out_dir = f.out_dir;
    if (f.seed) c.rng_seed = *f.seed;
    if (f.end_year) c.forecast_end_year = *f.end_year;
    if (f.level) c.interval_level = *f.level;
    if (f.threads) c.threads = *f.threads;
    return c;
}

int exit_code(ExitStatus s) { return static_cast<int>(s); }

void print_errors(const PipelineResult& r) {
    for (const auto& e : r.errors) fmt::print(stderr, "error: {} [{}]: {}\n", e.country, e.stage, e.message);
}

void print_written(const std::vector<fs::path>& files) {
    for (const auto& p : files) fmt::print("wrote {}\n", p.generic_string());
}

int cmd_validate(const PipelineConfig& c) {
    c.validate();
    const auto emissions = load_emissions_csv(c.emissions_path);
    const auto energy = load_energy_csv(c.energy_path, c.energy_mode);
    std::size_t pop_count = 0;
    if (c.population_path) pop_count = load_population_csv(*c.population_path).size();
    for (const auto& s : emissions) {
        fmt::print("{}: {}-{} ({} years{})\n", s.country, s.start_year, s.end_year(), s.size(),
                   s.has_gaps() ? ", has gaps" : "");
    }
    fmt::print("ok: {} emission series, {} energy tables, {} population series\n", emissions.size(), energy.size(),
               pop_count);
    return 0;
}

int cmd_classify(const PipelineConfig& c) {
    c.validate();
    const auto energy = load_energy_csv(c.energy_path, c.energy_mode);
    fmt::print("country,avg_fossil,avg_renewable,label\n");
    for (const auto& table : energy) {
        if (!c.countries.empty() &&
            std::find(c.countries.begin(), c.countries.end(), table.country) == c.countries.end()) {
            continue;
        }
        const auto cat = classify(compute_indices(table), c.thresholds);
        fmt::print("{},{:.4f},{:.4f},{}\n", table.country, cat.avg_fossil, cat.avg_renewable, to_string(cat.label));
    }
    return 0;
}

int cmd_pipeline(const PipelineConfig& c, bool forecast, bool plots) {
    const auto result = run_pipeline(c, PipelineOptions{forecast});
    print_errors(result);
    print_written(emit_report(result, c, c.out_dir));
    if (forecast) print_written(emit_models(result, c.out_dir));
    if (plots) print_written(emit_plots(result, c.out_dir));
    for (const auto& r : result.countries) {
        fmt::print("{}: {} -> {} {}\n", r.country, to_string(r.classification.label), to_string(r.selected().family),
                   describe(r.selected().config));
    }
    return exit_code(result.status);
}

int cmd_report(const PipelineConfig& c) {
    if (!(c.interval_level > 0.0 && c.interval_level < 1.0)) {
        throw Error(ErrorKind::Config, "interval_level outside (0, 1)");
    }
    const auto models = load_models(c.out_dir);
    PipelineResult result;
    for (const auto& pm : models) {
        if (!c.countries.empty() &&
            std::find(c.countries.begin(), c.countries.end(), pm.country) == c.countries.end()) {
            continue;
        }
        CountryReport r;
        r.country = pm.country;
        r.history = AnnualSeries::from_values(pm.country, pm.model.start_year, pm.model.history);
        const int horizon = c.forecast_end_year - r.history.end_year();
        if (horizon < 1) {
            throw Error(ErrorKind::Config, fmt::format("forecast_end_year {} must be after {}", c.forecast_end_year,
                                                       r.history.end_year()));
        }
        r.selected_model = pm.model;
        r.forecast = forecast(pm.model, horizon, c.interval_level, country_seed(c.rng_seed, pm.country));
        result.countries.push_back(std::move(r));
    }
    std::vector<fs::path> written;
    for (const auto& r : result.countries) {
        const auto p = c.out_dir / fmt::format("forecast_{}.csv", r.country);
        write_text_file(p, forecast_csv(r.history, *r.forecast));
        written.push_back(p);
    }
    print_written(written);
    print_written(emit_plots(result, c.out_dir));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co2cast: emissions forecasting and energy-mix analytics"};
    app.require_subcommand(1);

    Flags flags;
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"validate", "load and schema-check the input files"},
        {"classify", "energy-mix indices and country labels"},
        {"benchmark", "grid search per model family, no forecast"},
        {"forecast", "benchmark, refit the winner and forecast"},
        {"run", "full pipeline with plots"},
        {"report", "re-emit forecasts and plots from persisted models"},
    };
    for (const auto& s : subs) add_flags(*app.add_subcommand(s.name, s.help), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        const auto config = build_config(flags);
        if (name == "validate") return cmd_validate(config);
        if (name == "classify") return cmd_classify(config);
        if (name == "benchmark") return cmd_pipeline(config, false, false);
        if (name == "forecast") return cmd_pipeline(config, true, false);
        if (name == "run") return cmd_pipeline(config, true, true);
        return cmd_report(config);
    } catch (const Error& e) {
        fmt::print(stderr, "{} error: {}\n", to_string(e.kind()), e.what());
        switch (e.kind()) {
            case ErrorKind::Config:
            case ErrorKind::Schema:
            case ErrorKind::Parse:
            case ErrorKind::DuplicateKey:
            case ErrorKind::Validation:
            case ErrorKind::Domain:
                return 3;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
