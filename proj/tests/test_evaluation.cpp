#include <algorithm>
#include <numeric>

#include "co2cast/evaluation.hpp"
#include "test_helpers.hpp"

using namespace co2cast;
using testutil::error_kind_of;
using testutil::series;

namespace {

struct Brute {
    double mae, rmse, mape, r2;
};

Brute brute_metrics(const std::vector<double>& a, const std::vector<double>& p) {
    const double n = static_cast<double>(a.size());
    double abs_sum = 0, sq_sum = 0, pct_sum = 0, mean = 0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i];
    mean /= n;
    double sst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = a[i] - p[i];
        abs_sum += std::fabs(e);
        sq_sum += e * e;
        pct_sum += std::fabs(e) / std::fabs(a[i]);
        sst += (a[i] - mean) * (a[i] - mean);
    }
    return {abs_sum / n, std::sqrt(sq_sum / n), 100.0 * pct_sum / n, 1.0 - sq_sum / sst};
}

BenchmarkRow row(ModelFamily f, double rmse, double mae, double mape, ModelConfig cfg = ArimaOrder{}) {
    BenchmarkRow r;
    r.family = f;
    r.config = std::move(cfg);
    r.test_metrics = {mae, rmse, mape, 0.5};
    return r;
}

}  // namespace

TEST_CASE("metrics on the hand case") {
    const auto m = compute_metrics(std::vector<double>{100, 110}, std::vector<double>{90, 120});
    CHECK(m.mae == 10.0);
    CHECK(m.rmse == 10.0);
    CHECK(m.mape == doctest::Approx(9.5455).epsilon(1e-4));
    REQUIRE(m.r2);
    CHECK(*m.r2 == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("perfect forecast") {
    const std::vector<double> a{3, 7, 1, 9};
    const auto m = compute_metrics(a, a);
    CHECK(m.mae == 0);
    CHECK(m.rmse == 0);
    CHECK(m.mape == 0);
    CHECK(*m.r2 == 1.0);
}

TEST_CASE("metrics agree with brute force on random pairs") {
    GaussianRng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 30);
        std::vector<double> a, p;
        for (int i = 0; i < n; ++i) {
            a.push_back(50 + 20 * rng.normal());
            p.push_back(a.back() + 5 * rng.normal());
        }
        const auto m = compute_metrics(a, p);
        const auto b = brute_metrics(a, p);
        CHECK(std::abs(m.mae - b.mae) <= 1e-9);
        CHECK(std::abs(m.rmse - b.rmse) <= 1e-9);
        CHECK(std::abs(m.mape - b.mape) <= 1e-9);
        CHECK(std::abs(*m.r2 - b.r2) <= 1e-9);
        CHECK(m.mae <= m.rmse + 1e-12);
        CHECK(*m.r2 <= 1.0);

        std::vector<std::size_t> idx(a.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::reverse(idx.begin(), idx.end());
        std::vector<double> ra, rp;
        for (auto i : idx) {
            ra.push_back(a[i]);
            rp.push_back(p[i]);
        }
        const auto r = compute_metrics(ra, rp);
        CHECK(r.mae == doctest::Approx(m.mae).epsilon(1e-12));
        CHECK(r.rmse == doctest::Approx(m.rmse).epsilon(1e-12));
    }
}

TEST_CASE("R2 of the test-mean baseline is zero") {
    const std::vector<double> a{1700, 1712, 1690, 1705, 1695};
    const double mean = (1700 + 1712 + 1690 + 1705 + 1695) / 5.0;
    const auto base = compute_metrics(a, std::vector<double>(5, mean));
    CHECK(*base.r2 == doctest::Approx(0.0).scale(1.0));
    const auto worse = compute_metrics(a, std::vector<double>(5, mean + 3));
    CHECK(*worse.r2 < 0.0);
    CHECK(worse.mape < 1.0);
}

TEST_CASE("metric errors and undefined R2") {
    CHECK(error_kind_of([] { compute_metrics(std::vector<double>{1, 2}, std::vector<double>{1}); }) ==
          ErrorKind::Domain);
    CHECK(error_kind_of([] { compute_metrics(std::vector<double>{}, std::vector<double>{}); }) == ErrorKind::Domain);
    try {
        compute_metrics(std::vector<double>{1, 0, 2}, std::vector<double>{1, 1, 1});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
    const auto m = compute_metrics(std::vector<double>{5, 5, 5}, std::vector<double>{4, 5, 6});
    CHECK_FALSE(m.r2.has_value());
    CHECK(m.mae == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("chronological split") {
    std::vector<double> v(24);
    std::iota(v.begin(), v.end(), 1.0);
    const auto s = chrono_split(series(v), 0.8);
    CHECK(s.train.size() == 19);
    CHECK(s.test.size() == 5);
    CHECK(s.test.start_year == 2019);
    std::vector<double> joined = s.train.values;
    joined.insert(joined.end(), s.test.values.begin(), s.test.values.end());
    CHECK(joined == v);

    const auto t = chrono_split(series({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), 0.5);
    CHECK(t.train.size() == 5);
    CHECK(t.test.size() == 5);
    CHECK(error_kind_of([] { chrono_split(series({1, 2}), 0.1); }) == ErrorKind::Domain);
    CHECK(error_kind_of([] { chrono_split(series({1, 2}), 1.0); }) == ErrorKind::Domain);
}

TEST_CASE("rolling-origin folds") {
    const auto y = series(testutil::white_noise(24, 8, 10.0));
    const auto cv = rolling_origin_cv(y, ArimaOrder{0, 0, 0}, 16, 1);
    REQUIRE(cv.folds.size() == 8);
    for (std::size_t i = 0; i < cv.folds.size(); ++i) {
        CHECK(cv.folds[i].train_end_year == 2000 + 15 + static_cast<int>(i));
        CHECK(cv.folds[i].horizon == 1);
    }
    CHECK(cv.failed_folds == 0);
    REQUIRE(cv.aggregate);
    double mae = 0;
    for (const auto& f : cv.folds) mae += f.metrics->mae / 8;
    CHECK(cv.aggregate->mae == doctest::Approx(mae));

    const auto one = rolling_origin_cv(y, ArimaOrder{0, 0, 0}, 16, 8);
    CHECK(one.folds.size() == 1);
    CHECK(error_kind_of([&] { rolling_origin_cv(y, ArimaOrder{0, 0, 0}, 20, 5); }) == ErrorKind::Domain);
}

TEST_CASE("rolling-origin Holt on a line is exact") {
    std::vector<double> v;
    for (int t = 1; t <= 24; ++t) v.push_back(5.0 + 2.0 * t);
    const auto cv = rolling_origin_cv(series(v), HoltCandidate{}, 10, 3);
    REQUIRE(cv.aggregate);
    CHECK(cv.aggregate->mae < 1e-6);
}

TEST_CASE("failed folds are counted") {
    const auto y = series(testutil::white_noise(24, 3, 10.0));
    const auto cv = rolling_origin_cv(y, ArimaOrder{2, 1, 2}, 8, 1);
    CHECK(cv.failed_folds > 0);
    CHECK(cv.folds.size() == 16);
    CHECK(cv.aggregate.has_value());
}

TEST_CASE("config helpers") {
    CHECK(describe(ArimaOrder{1, 1, 0}) == "ARIMA(1,1,0)");
    CHECK(describe(SarimaOrder{{1, 0, 1}, 1, 1, 0, 4}) == "SARIMA(1,0,1)(1,1,0)[4]");
    CHECK(parameter_count(ArimaOrder{2, 1, 1}) == 4);
    CHECK(parameter_count(SarimaOrder{{1, 0, 1}, 1, 1, 1, 4}) == 5);
    CHECK(parameter_count(HoltCandidate{}) == 3);
    CHECK(family_of(HoltCandidate{}) == ModelFamily::HoltWinters);
    CHECK(default_arima_grid().size() == 27);
    CHECK(default_sarima_grid(1).size() == 27);
    CHECK(default_sarima_grid(4).size() == 27 * 18);
    CHECK(default_holt_grid().size() == 19 * 19 * 4);
}

TEST_CASE("singleton grid wins by default") {
    const auto y = series(testutil::white_noise(24, 1, 10.0));
    const auto r = grid_search(y, ModelFamily::Arima, {ArimaOrder{0, 0, 0}});
    CHECK(std::get<ArimaOrder>(r.config) == ArimaOrder{0, 0, 0});
    CHECK(r.configs_evaluated == 1);
    CHECK(r.test_forecast.size() == 5);
    CHECK(r.cv.folds.size() == 5);
}

TEST_CASE("grid search picks the lowest test RMSE") {
    const auto y = series(simulate_arma({1, 1, 0}, {{0.5}, {}, {}, {}}, 1.0, 40, 12));
    const auto grid = default_arima_grid();
    const auto best = grid_search(y, ModelFamily::Arima, grid);
    const auto split = chrono_split(y, 0.8);
    for (const auto& cfg : grid) {
        try {
            const auto m = fit_model(split.train, cfg);
            const auto f = point_forecast(m, static_cast<int>(split.test.size()));
            CHECK(compute_metrics(split.test.values, f).rmse >= best.test_metrics.rmse - 1e-12);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("threaded grid search matches serial") {
    const auto y = series(testutil::white_noise(24, 21, 100.0, 4.0));
    GridSearchOptions serial, pooled;
    pooled.threads = 4;
    const auto grid = holt_grid(0.1, {0.9, 1.0});
    const auto a = grid_search(y, ModelFamily::HoltWinters, grid, serial);
    const auto b = grid_search(y, ModelFamily::HoltWinters, grid, pooled);
    CHECK(describe(a.config) == describe(b.config));
    CHECK(a.test_metrics.rmse == b.test_metrics.rmse);
    CHECK(a.test_forecast == b.test_forecast);
}

TEST_CASE("grid search reports skipped configs and total failure") {
    const auto y = series(testutil::white_noise(14, 2, 10.0));
    const auto r = grid_search(y, ModelFamily::Arima, {ArimaOrder{2, 0, 2}, ArimaOrder{0, 0, 0}});
    CHECK(std::get<ArimaOrder>(r.config) == ArimaOrder{0, 0, 0});
    CHECK(r.skipped.size() == 1);
    CHECK(error_kind_of([&] { grid_search(y, ModelFamily::Arima, {ArimaOrder{2, 0, 2}}); }) ==
          ErrorKind::ExhaustiveFailure);
    CHECK(error_kind_of([&] { grid_search(y, ModelFamily::Arima, {}); }) == ErrorKind::Domain);
}

TEST_CASE("select_best ordering") {
    SUBCASE("Nigeria-like") {
        const auto ranked = select_best({row(ModelFamily::Arima, 14.20, 11, 8), row(ModelFamily::Sarima, 14.27, 11, 8),
                                         row(ModelFamily::HoltWinters, 9.84, 7, 5, HoltCandidate{})});
        CHECK(ranked[0].family == ModelFamily::HoltWinters);
        CHECK(ranked[1].family == ModelFamily::Arima);
        CHECK(ranked[2].family == ModelFamily::Sarima);
    }
    SUBCASE("Russia-like") {
        const auto ranked =
            select_best({row(ModelFamily::HoltWinters, 61.37, 50, 3, HoltCandidate{}), row(ModelFamily::Arima, 59.17, 48, 3),
                         row(ModelFamily::Sarima, 59.11, 48, 3)});
        CHECK(ranked[0].family == ModelFamily::Sarima);
    }
    SUBCASE("ties fall through MAE, MAPE, then parameter count") {
        auto ranked = select_best({row(ModelFamily::Arima, 5, 4, 2), row(ModelFamily::Sarima, 5, 3, 2)});
        CHECK(ranked[0].family == ModelFamily::Sarima);
        ranked = select_best({row(ModelFamily::Arima, 5, 4, 2), row(ModelFamily::Sarima, 5, 4, 1)});
        CHECK(ranked[0].family == ModelFamily::Sarima);
        ranked = select_best({row(ModelFamily::Arima, 5, 4, 2, ArimaOrder{2, 0, 2}),
                              row(ModelFamily::HoltWinters, 5, 4, 2, HoltCandidate{})});
        CHECK(ranked[0].family == ModelFamily::HoltWinters);
    }
    SUBCASE("input order does not matter") {
        std::vector<BenchmarkRow> rows = {row(ModelFamily::Arima, 3, 2, 1), row(ModelFamily::Sarima, 3, 2, 1),
                                          row(ModelFamily::HoltWinters, 3, 2, 1, HoltCandidate{})};
        const auto a = select_best(rows);
        std::reverse(rows.begin(), rows.end());
        const auto b = select_best(rows);
        for (std::size_t i = 0; i < 3; ++i) CHECK(a[i].family == b[i].family);
    }
    CHECK(select_best({row(ModelFamily::Arima, 1, 1, 1)}).size() == 1);
    CHECK(error_kind_of([] { select_best({}); }) == ErrorKind::Domain);
}

TEST_CASE("residual diagnostics") {
    const auto noise = fit_arima(series(testutil::white_noise(60, 4, 10.0)), {0, 0, 0});
    const auto d = residual_diagnostics(noise);
    CHECK(d.ljung_box_lag == 10);
    CHECK(d.ljung_box_p > 0.05);
    CHECK_FALSE(d.divergent);

    const auto ar = simulate_arma({1, 0, 0}, {{0.9}, {}, {}, {}}, 1.0, 100, 4);
    const auto underfit = fit_arima(series(ar), {0, 0, 0});
    const auto u = residual_diagnostics(underfit);
    CHECK(u.residual_autocorrelation);

    std::vector<double> growth;
    for (int t = 0; t < 20; ++t) growth.push_back(std::pow(1.3, t));
    const auto explosive = fit_arima(series(growth), {0, 2, 0});
    CHECK(residual_diagnostics(explosive).divergent);
    CHECK(residual_diagnostics(fit_arima(series(testutil::white_noise(24, 4, 10.0)), {0, 0, 0})).ljung_box_lag == 4);
}
