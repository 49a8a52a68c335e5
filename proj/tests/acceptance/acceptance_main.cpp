// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "co2cast/energymix.hpp"
#include "co2cast/error.hpp"
#include "co2cast/ingest.hpp"
#include "co2cast/evaluation.hpp"
#include "co2cast/models.hpp"
#include "co2cast/pipeline.hpp"
#include "co2cast/preprocess.hpp"
#include "co2cast/random.hpp"
#include "co2cast/report.hpp"

using namespace co2cast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

AnnualSeries series(std::vector<double> v) { return AnnualSeries::from_values("TST", 2000, std::move(v)); }

std::vector<double> normals(GaussianRng& rng, int n, double mean = 0.0, double sd = 1.0) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& x : out) x = mean + sd * rng.normal();
    return out;
}

Outcome cagr_reproduction() {
    struct Case {
        const char* country;
        double first, last, expected;
    };
    const Case cases[] = {{"NGA", 68.4, 128.7, 2.8}, {"BRA", 319, 478, 1.8}, {"RUS", 1592, 1732, 0.4}};
    Outcome o{true, {}};
    for (const auto& c : cases) {
        const double v = cagr(c.first, c.last, 23);
        o.pass = o.pass && std::abs(v - c.expected) <= 0.05;
        o.detail += fmt::format("{} {:.3f}% (target {}); ", c.country, v, c.expected);
    }
    return o;
}

Outcome classification_reproduction() {
    struct Case {
        const char* country;
        double fossil, renewable;
        CountryLabel expected;
    };
    // Only Brazil's renewable average is a reference value; any value below
    // the renewable cut leaves the rule unchanged.
    const Case cases[] = {
        {"NGA", 0.823, 0.177, CountryLabel::FossilDependent},
        {"USA", 0.706, 0.150, CountryLabel::TransitionPhase},
        {"CHN", 0.785, 0.190, CountryLabel::TransitionPhase},
        {"RUS", 0.768, 0.120, CountryLabel::TransitionPhase},
        {"BRA", 0.290, 0.690, CountryLabel::RenewableAccelerated},
    };
    Outcome o{true, {}};
    for (const auto& c : cases) {
        MixIndices m;
        m.country = c.country;
        m.avg_fossil = c.fossil;
        m.avg_renewable = c.renewable;
        const auto label = classify(m).label;
        o.pass = o.pass && label == c.expected;
        o.detail += fmt::format("{}={} ", c.country, to_string(label));
    }
    return o;
}

Outcome metric_oracle() {
    GaussianRng rng(31337);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 40);
        std::vector<double> a, p;
        for (int i = 0; i < n; ++i) {
            a.push_back(10.0 + 1000.0 * rng.uniform());
            p.push_back(a.back() + 50.0 * rng.normal());
        }
        // Brute force, written out independently.
        double sae = 0, sse = 0, spe = 0, mean = 0, sst = 0;
        for (double v : a) mean += v;
        mean /= n;
        for (int i = 0; i < n; ++i) {
            sae += std::fabs(a[i] - p[i]);
            sse += (a[i] - p[i]) * (a[i] - p[i]);
            spe += std::fabs(a[i] - p[i]) / std::fabs(a[i]);
            sst += (a[i] - mean) * (a[i] - mean);
        }
        const auto m = compute_metrics(a, p);
        worst = std::max({worst, std::fabs(m.mae - sae / n), std::fabs(m.rmse - std::sqrt(sse / n)),
                          std::fabs(m.mape - 100.0 * spe / n)});
        if (sst > 0) worst = std::max(worst, std::fabs(*m.r2 - (1.0 - sse / sst)));
        else if (m.r2) worst = std::max(worst, 1.0);
    }
    const auto h = compute_metrics(std::vector<double>{100, 110}, std::vector<double>{90, 120});
    const bool hand = h.mae == 10.0 && h.rmse == 10.0 && std::fabs(h.mape - 9.5455) <= 1e-3 && h.r2 &&
                      std::fabs(*h.r2 + 3.0) <= 1e-9;
    return {worst <= 1e-9 && hand,
            fmt::format("max deviation {:.3g} over 1000 pairs; hand case mae={} rmse={} mape={:.4f} r2={}", worst,
                        h.mae, h.rmse, h.mape, h.r2 ? *h.r2 : NAN)};
}

Outcome negative_r2() {
    const auto start = std::chrono::steady_clock::now();
    GaussianRng rng(1700);
    const auto y = series(normals(rng, 24, 1700.0, 15.0));
    std::string detail;
    bool found = false;
    const std::vector<std::pair<ModelFamily, std::vector<ModelConfig>>> grids = {
        {ModelFamily::Arima, default_arima_grid()},
        {ModelFamily::Sarima, default_sarima_grid(1)},
        {ModelFamily::HoltWinters, default_holt_grid()},
    };
    for (const auto& [family, grid] : grids) {
        const auto row = grid_search(y, family, grid);
        const auto& m = row.test_metrics;
        detail += fmt::format("{} mape={:.2f}% r2={:.3f}; ", to_string(family), m.mape, m.r2 ? *m.r2 : NAN);
        found = found || (m.mape < 5.0 && m.r2 && *m.r2 < 0.0);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail += fmt::format("{:.2f}s", secs);
    return {found && secs < 10.0, detail};
}

Outcome parameter_recovery() {
    const auto start = std::chrono::steady_clock::now();
    int ar_ok = 0, ma_ok = 0, sar_ok = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto ar = simulate_arma({1, 0, 0}, {{0.7}, {}, {}, {}}, 1.0, 500, 1000 + rep);
        ar_ok += std::fabs(fit_arima(series(ar), {1, 0, 0}).arma.ar[0] - 0.7) <= 0.1;
        const auto ma = simulate_arma({0, 0, 1}, {{}, {0.5}, {}, {}}, 1.0, 500, 2000 + rep);
        ma_ok += std::fabs(fit_arima(series(ma), {0, 0, 1}).arma.ma[0] - 0.5) <= 0.1;
        const SarimaOrder so{{0, 0, 0}, 1, 0, 0, 4};
        const auto sar = simulate_sarima(so, {{}, {}, {0.6}, {}}, 1.0, 400, 3000 + rep);
        sar_ok += std::fabs(fit_sarima(series(sar), so).arma.seasonal_ar[0] - 0.6) <= 0.1;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {ar_ok >= 18 && ma_ok >= 18 && sar_ok >= 18 && secs < 30.0,
            fmt::format("AR {}/20, MA {}/20, seasonal AR {}/20 in {:.2f}s", ar_ok, ma_ok, sar_ok, secs)};
}

Outcome holt_exactness() {
    std::vector<double> y;
    for (int t = 1; t <= 10; ++t) y.push_back(5.0 + 2.0 * t);
    const auto m = fit_holt_winters(series(y), HoltSearch{});
    const auto f = point_forecast(m, 35);
    double worst = 0.0;
    for (int h = 1; h <= 35; ++h) worst = std::max(worst, std::fabs(f[h - 1] - (25.0 + 2.0 * h)));
    const double phi = std::get<HoltParams>(m.spec).phi;
    return {worst <= 1e-6 && phi == 1.0, fmt::format("max |error| {:.3g}, phi={}", worst, phi)};
}

Outcome interval_coverage() {
    const auto start = std::chrono::steady_clock::now();
    constexpr int kReps = 1000;
    constexpr int kH = 5;
    std::vector<int> hits(kH, 0);
    for (int rep = 0; rep < kReps; ++rep) {
        const auto path = simulate_arma({1, 0, 0}, {{0.6}, {}, {}, {}}, 1.0, 100 + kH, 50000 + rep);
        const std::vector<double> train(path.begin(), path.begin() + 100);
        const auto f = forecast(fit_arima(series(train), {1, 0, 0}), kH);
        for (int h = 0; h < kH; ++h) hits[h] += path[100 + h] >= f.lower[h] && path[100 + h] <= f.upper[h];
    }
    bool ok = true;
    std::string detail;
    for (int h = 0; h < kH; ++h) {
        const double c = static_cast<double>(hits[h]) / kReps;
        ok = ok && c >= 0.92 && c <= 0.98;
        detail += fmt::format("h{}={:.3f} ", h + 1, c);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail += fmt::format("in {:.2f}s", secs);
    return {ok && secs < 60.0, detail};
}

Outcome interval_monotonicity() {
    std::vector<AnnualSeries> inputs;
    for (const auto& s : load_emissions_csv(fs::path(CO2CAST_DATA_DIR) / "emissions.csv")) inputs.push_back(s);
    inputs.push_back(series(simulate_arma({1, 1, 1}, {{0.5}, {0.3}, {}, {}}, 2.0, 60, 9)));
    inputs.push_back(series(simulate_sarima({{0, 0, 0}, 1, 1, 1, 4}, {{}, {}, {0.4}, {0.3}}, 1.0, 80, 10)));

    std::vector<ModelConfig> configs = default_arima_grid();
    for (const auto& c : sarima_grid({0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, 4)) configs.push_back(c);

    int fitted = 0, violations = 0;
    for (const auto& s : inputs) {
        for (const auto& cfg : configs) {
            FittedModel m;
            try {
                m = fit_model(s, cfg);
            } catch (const Error&) {
                continue;
            }
            ++fitted;
            const auto f = forecast(m, 37);
            double prev = 0.0;
            for (int h = 0; h < 37; ++h) {
                const double hw = 0.5 * (f.upper[h] - f.lower[h]);
                if (hw < prev - 1e-9 * std::max(1.0, prev)) {
                    ++violations;
                    break;
                }
                prev = hw;
            }
        }
    }
    return {fitted > 0 && violations == 0,
            fmt::format("{} ARIMA/SARIMA fits, {} with a shrinking half-width over h=1..37", fitted, violations)};
}

Outcome stationarity_sanity() {
    const auto start = std::chrono::steady_clock::now();
    int wn_adf = 0, wn_kpss_keep = 0, rw_adf = 0, rw_kpss = 0;
    for (int rep = 0; rep < 200; ++rep) {
        GaussianRng rng(90000 + rep);
        const auto wn = normals(rng, 200);
        auto rw = normals(rng, 200);
        for (std::size_t i = 1; i < rw.size(); ++i) rw[i] += rw[i - 1];
        wn_adf += adf_test(wn).decision_at_5pct == Decision::RejectNull;
        wn_kpss_keep += kpss_test(wn).decision_at_5pct == Decision::FailToReject;
        rw_adf += adf_test(rw).decision_at_5pct == Decision::RejectNull;
        rw_kpss += kpss_test(rw).decision_at_5pct == Decision::RejectNull;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = wn_adf >= 160 && wn_kpss_keep >= 160 && rw_adf <= 40 && rw_kpss >= 160 && secs < 30.0;
    return {ok, fmt::format("white noise: ADF rejects {}/200, KPSS keeps {}/200; random walk: ADF rejects {}/200, "
                            "KPSS rejects {}/200; {:.2f}s",
                            wn_adf, wn_kpss_keep, rw_adf, rw_kpss, secs)};
}

BenchmarkRow table_row(ModelFamily family, double mae, double rmse, double r2, double mape) {
    BenchmarkRow r;
    r.family = family;
    r.config = family == ModelFamily::HoltWinters ? ModelConfig{HoltCandidate{}}
               : family == ModelFamily::Sarima    ? ModelConfig{SarimaOrder{}}
                                                  : ModelConfig{ArimaOrder{}};
    r.test_metrics = {mae, rmse, mape, r2};
    return r;
}

Outcome winner_ranking() {
    const auto nga = select_best({table_row(ModelFamily::Arima, 11.95, 14.20, 0.617, 9.37),
                                  table_row(ModelFamily::Sarima, 12.02, 14.27, 0.613, 9.41),
                                  table_row(ModelFamily::HoltWinters, 8.31, 9.84, 0.803, 6.35)});
    const auto rus = select_best({table_row(ModelFamily::Arima, 51.07, 59.17, -2.195, 3.07),
                                  table_row(ModelFamily::Sarima, 50.98, 59.11, -2.188, 3.07),
                                  table_row(ModelFamily::HoltWinters, 53.78, 61.37, -2.437, 3.23)});
    return {nga.front().family == ModelFamily::HoltWinters && rus.front().family == ModelFamily::Sarima,
            fmt::format("NGA winner {}, RUS winner {}", to_string(nga.front().family), to_string(rus.front().family))};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome end_to_end() {
    const fs::path data = CO2CAST_DATA_DIR;
    PipelineConfig cfg;
    cfg.emissions_path = data / "emissions.csv";
    cfg.energy_path = data / "energy.csv";
    cfg.population_path = data / "population.csv";
    const auto root = fs::temp_directory_path() / "co2cast_acceptance";
    fs::remove_all(root);

    const auto start = std::chrono::steady_clock::now();
    const auto first = run_pipeline(cfg);
    emit_report(first, cfg, root / "a");
    emit_plots(first, root / "a");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto second = run_pipeline(cfg);
    emit_report(second, cfg, root / "b");

    bool shapes = first.countries.size() == 5 && first.errors.empty();
    for (const auto& c : first.countries) {
        shapes = shapes && c.forecast && c.forecast->points.size() == 37 && c.forecast->start_year == 2024;
    }
    const bool identical = slurp(root / "a" / "report.json") == slurp(root / "b" / "report.json");
    return {shapes && identical && secs < 60.0,
            fmt::format("{} countries, 37 forecast values each: {}, byte-identical report.json: {}, {:.2f}s",
                        first.countries.size(), shapes ? "yes" : "no", identical ? "yes" : "no", secs)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"CAGR reproduction", cagr_reproduction},
        {"classification reproduction", classification_reproduction},
        {"metric oracle", metric_oracle},
        {"negative R2 on a near-constant series", negative_r2},
        {"parameter recovery", parameter_recovery},
        {"Holt exactness", holt_exactness},
        {"interval coverage", interval_coverage},
        {"interval monotonicity", interval_monotonicity},
        {"stationarity-test sanity", stationarity_sanity},
        {"winner ranking", winner_ranking},
        {"end-to-end determinism and shape", end_to_end},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("threw: {}", e.what())};
        }
        failures += !o.pass;
        fmt::print("{} {:>2}. {}: {}\n", o.pass ? "PASS" : "FAIL", index, name, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
