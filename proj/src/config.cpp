#include "co2cast/config.hpp"

#include <fstream>
#include <string>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "detail/csv.hpp"

namespace co2cast {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorKind::Config, fmt::format("invalid value '{}' for '{}'", value, key));
}

double to_double(std::string_view key, std::string_view value) {
    const auto v = detail::parse_double(value);
    if (!v) bad_value(key, value);
    return *v;
}

long long to_int(std::string_view key, std::string_view value) {
    const auto v = detail::parse_int(value);
    if (!v) bad_value(key, value);
    return *v;
}

std::vector<int> to_int_list(std::string_view key, std::string_view value) {
    std::vector<int> out;
    for (auto f : detail::split_fields(value)) out.push_back(static_cast<int>(to_int(key, f)));
    return out;
}

std::vector<double> to_double_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (auto f : detail::split_fields(value)) out.push_back(to_double(key, f));
    return out;
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p;
}

}  // namespace

void PipelineConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
    if (emissions_path.empty()) fail("emissions path is required");
    if (energy_path.empty()) fail("energy path is required");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail(fmt::format("train_fraction {} outside (0, 1)", train_fraction));
    if (!(interval_level > 0.0 && interval_level < 1.0)) fail(fmt::format("interval_level {} outside (0, 1)", interval_level));
    if (sarima_seasonal_period < 1) fail("sarima_seasonal_period must be >= 1");
    if (cv_horizon < 1) fail("cv.horizon must be >= 1");
    if (threads < 1) fail("threads must be >= 1");
    if (!(thresholds.fossil >= 0.0 && thresholds.fossil <= 1.0 && thresholds.renewable >= 0.0 &&
          thresholds.renewable <= 1.0)) {
        fail("classification thresholds must lie in [0, 1]");
    }
    for (const auto& c : countries) {
        if (!is_valid_country_code(c)) fail(fmt::format("country '{}' is not a 3-letter uppercase ISO code", c));
    }
    if (grids.arima_p.empty() || grids.arima_d.empty() || grids.arima_q.empty() || grids.sarima_P.empty() ||
        grids.sarima_D.empty() || grids.sarima_Q.empty() || grids.holt_phi.empty()) {
        fail("model grids must not be empty");
    }
    if (!(grids.holt_step > 0.0 && grids.holt_step < 1.0)) fail("grid.holt.step must lie in (0, 1)");
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
    value = detail::trim(value);
    if (key == "emissions") {
        c.emissions_path = resolve(value, base_dir);
    } else if (key == "energy") {
        c.energy_path = resolve(value, base_dir);
    } else if (key == "population") {
        if (value.empty()) {
            c.population_path.reset();
        } else {
            c.population_path = resolve(value, base_dir);
        }
    } else if (key == "energy_mode") {
        c.energy_mode = parse_energy_mode(value);
    } else if (key == "countries") {
        c.countries.clear();
        for (auto f : detail::split_fields(value)) {
            if (!f.empty()) c.countries.emplace_back(f);
        }
    } else if (key == "train_fraction") {
        c.train_fraction = to_double(key, value);
    } else if (key == "forecast_end_year") {
        c.forecast_end_year = static_cast<int>(to_int(key, value));
    } else if (key == "interval_level") {
        c.interval_level = to_double(key, value);
    } else if (key == "sarima_seasonal_period") {
        c.sarima_seasonal_period = static_cast<int>(to_int(key, value));
    } else if (key == "rng_seed") {
        const auto v = to_int(key, value);
        if (v < 0) bad_value(key, value);
        c.rng_seed = static_cast<std::uint64_t>(v);
    } else if (key == "out_dir") {
        c.out_dir = resolve(value, base_dir);
    } else if (key == "cv.horizon") {
        c.cv_horizon = static_cast<int>(to_int(key, value));
    } else if (key == "threads") {
        c.threads = static_cast<int>(to_int(key, value));
    } else if (key == "classify.fossil_threshold") {
        c.thresholds.fossil = to_double(key, value);
    } else if (key == "classify.renewable_threshold") {
        c.thresholds.renewable = to_double(key, value);
    } else if (key == "grid.arima.p") {
        c.grids.arima_p = to_int_list(key, value);
    } else if (key == "grid.arima.d") {
        c.grids.arima_d = to_int_list(key, value);
    } else if (key == "grid.arima.q") {
        c.grids.arima_q = to_int_list(key, value);
    } else if (key == "grid.sarima.P") {
        c.grids.sarima_P = to_int_list(key, value);
    } else if (key == "grid.sarima.D") {
        c.grids.sarima_D = to_int_list(key, value);
    } else if (key == "grid.sarima.Q") {
        c.grids.sarima_Q = to_int_list(key, value);
    } else if (key == "grid.holt.step") {
        c.grids.holt_step = to_double(key, value);
    } else if (key == "grid.holt.phi") {
        c.grids.holt_phi = to_double_list(key, value);
    } else {
        throw Error(ErrorKind::Config, fmt::format("unknown config key '{}'", key));
    }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, fmt::format("cannot open config file '{}'", path.string()));
    const auto base_dir = path.parent_path();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Config, fmt::format("{}:{}: expected 'key = value'", path.string(), line_no));
        }
        apply_setting(config, detail::trim(view.substr(0, eq)), view.substr(eq + 1), base_dir);
    }
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
    PipelineConfig c;
    apply_config_file(c, path);
    return c;
}

}  // namespace co2cast
