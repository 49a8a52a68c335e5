#include <fstream>
#include <set>
#include <sstream>

#include "co2cast/config.hpp"
#include "co2cast/pipeline.hpp"
#include "co2cast/report.hpp"
#include "test_helpers.hpp"

using namespace co2cast;
using testutil::error_kind_of;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CO2CAST_DATA_DIR;

PipelineConfig bundled() {
    PipelineConfig c;
    c.emissions_path = kData / "emissions.csv";
    c.energy_path = kData / "energy.csv";
    c.population_path = kData / "population.csv";
    return c;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("co2cast_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("config defaults and validation") {
    PipelineConfig c = bundled();
    CHECK(c.train_fraction == 0.8);
    CHECK(c.forecast_end_year == 2060);
    CHECK(c.interval_level == 0.95);
    CHECK(c.sarima_seasonal_period == 1);
    CHECK_NOTHROW(c.validate());

    auto bad = c;
    bad.train_fraction = 1.0;
    CHECK(error_kind_of([&] { bad.validate(); }) == ErrorKind::Config);
    bad = c;
    bad.interval_level = 0.0;
    CHECK(error_kind_of([&] { bad.validate(); }) == ErrorKind::Config);
    bad = c;
    bad.countries = {"../x"};
    CHECK(error_kind_of([&] { bad.validate(); }) == ErrorKind::Config);
    bad = c;
    bad.countries = {"nga"};
    CHECK(error_kind_of([&] { bad.validate(); }) == ErrorKind::Config);
}

TEST_CASE("config settings and files") {
    PipelineConfig c;
    apply_setting(c, "grid.arima.p", "0, 1", "/base");
    apply_setting(c, "grid.holt.phi", "0.9,1.0");
    apply_setting(c, "countries", "NGA,RUS");
    apply_setting(c, "emissions", "e.csv", "/base");
    apply_setting(c, "classify.fossil_threshold", "0.75");
    CHECK(c.grids.arima_p == std::vector<int>{0, 1});
    CHECK(c.grids.holt_phi == std::vector<double>{0.9, 1.0});
    CHECK(c.countries == std::vector<std::string>{"NGA", "RUS"});
    CHECK(c.emissions_path == fs::path("/base/e.csv"));
    CHECK(c.thresholds.fossil == 0.75);
    CHECK(error_kind_of([&] { apply_setting(c, "bogus", "1"); }) == ErrorKind::Config);
    CHECK(error_kind_of([&] { apply_setting(c, "train_fraction", "abc"); }) == ErrorKind::Config);

    const auto dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "run.conf");
        out << "# comment\nemissions = data/em.csv\n\nrng_seed = 7  # trailing\nforecast_end_year=2050\n";
    }
    const auto loaded = load_config_file(dir / "run.conf");
    CHECK(loaded.emissions_path == dir / "data/em.csv");
    CHECK(loaded.rng_seed == 7);
    CHECK(loaded.forecast_end_year == 2050);
    {
        std::ofstream out(dir / "broken.conf");
        out << "just words\n";
    }
    CHECK(error_kind_of([&] { load_config_file(dir / "broken.conf"); }) == ErrorKind::Config);
    CHECK(error_kind_of([&] { load_config_file(dir / "missing.conf"); }) == ErrorKind::Config);

    const auto shipped = load_config_file(kData / "pipeline.conf");
    CHECK_NOTHROW(shipped.validate());
    CHECK(shipped.population_path.has_value());
}

TEST_CASE("pipeline on the bundled dataset") {
    const auto cfg = bundled();
    const auto r = run_pipeline(cfg);
    CHECK(r.status == ExitStatus::Success);
    CHECK(r.errors.empty());
    REQUIRE(r.countries.size() == 5);
    std::vector<std::string> codes;
    for (const auto& c : r.countries) {
        codes.push_back(c.country);
        REQUIRE(c.forecast);
        CHECK(c.forecast->points.size() == 37);
        CHECK(c.forecast->start_year == 2024);
        CHECK(c.history.end_year() == 2023);
        REQUIRE(c.benchmark.size() == 3);
        std::set<ModelFamily> families;
        for (const auto& b : c.benchmark) families.insert(b.family);
        CHECK(families.size() == 3);
        for (std::size_t i = 1; i < c.benchmark.size(); ++i) {
            CHECK(c.benchmark[i - 1].test_metrics.rmse <= c.benchmark[i].test_metrics.rmse);
        }
        REQUIRE(c.selected_model);
        CHECK(c.selected_model->family == c.selected().family);
        CHECK(c.selected_model->n_obs >= 20);
        CHECK(c.history_stats.per_capita_first.has_value());
    }
    CHECK(codes == std::vector<std::string>{"BRA", "CHN", "NGA", "RUS", "USA"});
    CHECK(r.countries[0].classification.label == CountryLabel::RenewableAccelerated);
    CHECK(r.countries[2].classification.label == CountryLabel::FossilDependent);
    CHECK(r.countries[4].classification.label == CountryLabel::TransitionPhase);
    CHECK(std::abs(r.countries[2].history_stats.cagr_pct - 2.8) <= 0.05);
}

TEST_CASE("pipeline errors are per country") {
    auto cfg = bundled();
    cfg.countries = {"NGA", "ZZZ"};
    const auto r = run_pipeline(cfg);
    CHECK(r.status == ExitStatus::Partial);
    REQUIRE(r.countries.size() == 1);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].country == "ZZZ");
    CHECK(r.errors[0].stage == "ingest");

    cfg.countries = {"ZZZ", "QQQ"};
    CHECK(run_pipeline(cfg).status == ExitStatus::TotalFailure);
}

TEST_CASE("missing energy data fails classification only for that country") {
    const auto dir = scratch("partial");
    fs::create_directories(dir);
    fs::copy_file(kData / "emissions.csv", dir / "emissions.csv");
    {
        std::ifstream in(kData / "energy.csv");
        std::ofstream out(dir / "energy.csv");
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("RUS,", 0) != 0) out << line << "\n";
        }
    }
    PipelineConfig cfg;
    cfg.emissions_path = dir / "emissions.csv";
    cfg.energy_path = dir / "energy.csv";
    const auto r = run_pipeline(cfg);
    CHECK(r.status == ExitStatus::Partial);
    CHECK(r.countries.size() == 4);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].country == "RUS");
    CHECK(r.errors[0].stage == "classify");
    for (const auto& c : r.countries) CHECK_FALSE(c.history_stats.per_capita_first.has_value());
}

TEST_CASE("forecast end year must follow the history") {
    auto cfg = bundled();
    cfg.forecast_end_year = 2023;
    CHECK(error_kind_of([&] { run_pipeline(cfg); }) == ErrorKind::Config);
    cfg.forecast_end_year = 2030;
    cfg.countries = {"RUS"};
    const auto r = run_pipeline(cfg);
    CHECK(r.countries[0].forecast->points.size() == 7);
}

TEST_CASE("benchmark-only runs skip the forecast") {
    auto cfg = bundled();
    cfg.countries = {"BRA"};
    const auto r = run_pipeline(cfg, PipelineOptions{false});
    REQUIRE(r.countries.size() == 1);
    CHECK_FALSE(r.countries[0].forecast);
    CHECK_FALSE(r.countries[0].selected_model);
}

TEST_CASE("report files and determinism") {
    const auto cfg = bundled();
    const auto result = run_pipeline(cfg);
    const auto a = scratch("report_a");
    const auto b = scratch("report_b");
    const auto files = emit_report(result, cfg, a);
    CHECK(files.size() == 11);
    emit_report(run_pipeline(cfg), cfg, b);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));

    const auto doc = nlohmann::ordered_json::parse(slurp(a / "report.json"));
    CHECK(doc["schema_version"] == 1);
    CHECK_FALSE(doc["config_echo"].contains("out_dir"));
    REQUIRE(doc["countries"].size() == 5);
    const auto& nga = doc["countries"][2];
    CHECK(nga["country"] == "NGA");
    CHECK(nga["forecast"].size() == 37);
    CHECK(nga["selected"]["model"] == nga["benchmark"][0]["model"]);
    CHECK(nga["selected"]["config"] == nga["benchmark"][0]["config"]);
    for (const char* key : {"classification", "preprocessing", "history_stats", "benchmark", "selected", "forecast"}) {
        CHECK(nga.contains(key));
    }
    CHECK(nga["preprocessing"].contains("adf"));
    CHECK(nga["preprocessing"].contains("kpss"));
    CHECK(doc["errors"].empty());

    const auto fc = slurp(a / "forecast_NGA.csv");
    CHECK(fc.rfind("year,point,lower,upper,kind\n", 0) == 0);
    CHECK(count(fc, ",history\n") == 24);
    CHECK(count(fc, ",forecast\n") == 37);
    const auto bench = slurp(a / "benchmark_NGA.csv");
    CHECK(bench.rfind("model,mae,rmse,r2,mape\n", 0) == 0);
    CHECK(count(bench, "\n") == 4);
}

TEST_CASE("empty result still writes report.json") {
    const auto dir = scratch("empty");
    const auto files = emit_report(PipelineResult{}, bundled(), dir);
    CHECK(files.size() == 1);
    const auto doc = nlohmann::ordered_json::parse(slurp(dir / "report.json"));
    CHECK(doc["countries"].empty());
}

TEST_CASE("unwritable output directory") {
    const auto dir = scratch("blocked");
    fs::create_directories(dir);
    { std::ofstream(dir / "file") << "x"; }
    CHECK(error_kind_of([&] { emit_report(PipelineResult{}, bundled(), dir / "file" / "sub"); }) == ErrorKind::Io);
}

TEST_CASE("SVG geometry") {
    const auto history = testutil::series({100, 104, 103, 108, 111}, 2019, "TST");
    ForecastPath f{2024, {112, 112, 112}, {110, 109, 108}, {114, 115, 116}, 0.95};
    const auto svg = render_svg(history, &f);
    CHECK(svg.find("viewBox=\"0 0 900 500\"") != std::string::npos);
    CHECK(count(svg, "class=\"xtick\"") == 5);
    CHECK(count(svg, "class=\"ytick\"") == 5);
    CHECK(count(svg, "class=\"interval\"") == 1);
    CHECK(count(svg, "class=\"history\"") == 1);
    CHECK(count(svg, "class=\"forecast\"") == 1);
    CHECK(count(svg, "class=\"boundary\"") == 1);
    CHECK(count(svg, "<svg") == count(svg, "</svg>"));
    CHECK(render_svg(history, &f) == svg);

    const auto single = testutil::series({42}, 2023, "ONE");
    ForecastPath flat{2024, {42}, {42}, {42}, 0.95};
    const auto s1 = render_svg(single, &flat);
    CHECK(s1.find("nan") == std::string::npos);
    CHECK(s1.find("inf") == std::string::npos);
    CHECK(render_svg(single, nullptr).find("</svg>") != std::string::npos);
}

TEST_CASE("models persist and reload") {
    auto cfg = bundled();
    cfg.countries = {"CHN", "NGA"};
    const auto result = run_pipeline(cfg);
    const auto dir = scratch("models");
    CHECK(emit_models(result, dir).size() == 2);
    CHECK(emit_plots(result, dir).size() == 2);
    const auto loaded = load_models(dir);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].country == "CHN");
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& original = *result.countries[i].selected_model;
        const auto f = forecast(loaded[i].model, 37, 0.95, country_seed(cfg.rng_seed, loaded[i].country));
        CHECK(f.points == result.countries[i].forecast->points);
        CHECK(f.upper == result.countries[i].forecast->upper);
        CHECK(loaded[i].model.sigma2 == original.sigma2);
    }
    CHECK(error_kind_of([&] { load_models(scratch("nothing")); }) == ErrorKind::Io);
}
