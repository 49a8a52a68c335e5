#include "co2cast/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "co2cast/error.hpp"

namespace co2cast {

Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw Error(ErrorKind::Domain,
                    fmt::format("metric inputs differ in length ({} vs {})", actual.size(), predicted.size()));
    }
    if (actual.empty()) throw Error(ErrorKind::Domain, "metrics need at least one observation");
    const double n = static_cast<double>(actual.size());

    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double pct_sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            throw Error(ErrorKind::Domain, fmt::format("MAPE undefined: actual value at index {} is zero", i));
        }
        const double e = actual[i] - predicted[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        pct_sum += std::abs(e) / std::abs(actual[i]);
    }
    const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / n;
    double sst = 0.0;
    for (double a : actual) sst += (a - mean) * (a - mean);

    Metrics m;
    m.mae = abs_sum / n;
    m.rmse = std::sqrt(sq_sum / n);
    m.mape = 100.0 * pct_sum / n;
    if (sst > 0.0) m.r2 = 1.0 - sq_sum / sst;
    return m;
}

ChronoSplit chrono_split(const AnnualSeries& series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorKind::Domain, fmt::format("train fraction {} outside (0, 1)", train_fraction));
    }
    const std::size_t n = series.size();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw Error(ErrorKind::Domain,
                    fmt::format("split of {} observations at {} leaves an empty segment", n, train_fraction));
    }
    return {series.slice(0, n_train), series.slice(n_train, n - n_train)};
}

ModelFamily family_of(const ModelConfig& config) {
    switch (config.index()) {
        case 0: return ModelFamily::Arima;
        case 1: return ModelFamily::Sarima;
        default: return ModelFamily::HoltWinters;
    }
}

int parameter_count(const ModelConfig& config) {
    if (const auto* a = std::get_if<ArimaOrder>(&config)) return a->p + a->q + 1;
    if (const auto* s = std::get_if<SarimaOrder>(&config)) return s->base.p + s->base.q + s->P + s->Q + 1;
    const auto& h = std::get<HoltCandidate>(config);
    const int period = h.params ? h.params->seasonal_period : h.search.seasonal_period;
    return period > 1 ? 4 : 3;
}

std::string describe(const ModelConfig& config) {
    if (const auto* a = std::get_if<ArimaOrder>(&config)) return fmt::format("ARIMA({},{},{})", a->p, a->d, a->q);
    if (const auto* s = std::get_if<SarimaOrder>(&config)) {
        return fmt::format("SARIMA({},{},{})({},{},{})[{}]", s->base.p, s->base.d, s->base.q, s->P, s->D, s->Q, s->s);
    }
    const auto& h = std::get<HoltCandidate>(config);
    if (!h.params) return fmt::format("HW(optimized,m={})", h.search.seasonal_period);
    const auto& p = *h.params;
    if (p.seasonal_period > 1) {
        return fmt::format("HW(alpha={},beta={},phi={},gamma={},m={})", p.alpha, p.beta, p.phi, p.gamma,
                           p.seasonal_period);
    }
    return fmt::format("HW(alpha={},beta={},phi={})", p.alpha, p.beta, p.phi);
}

FittedModel fit_model(const AnnualSeries& series, const ModelConfig& config, const FitOptions& options) {
    if (const auto* a = std::get_if<ArimaOrder>(&config)) return fit_arima(series, *a, options);
    if (const auto* s = std::get_if<SarimaOrder>(&config)) return fit_sarima(series, *s, options);
    const auto& h = std::get<HoltCandidate>(config);
    if (h.params) return fit_holt_winters(series, *h.params);
    return fit_holt_winters(series, h.search, options);
}

std::vector<ModelConfig> arima_grid(const std::vector<int>& ps, const std::vector<int>& ds, const std::vector<int>& qs) {
    std::vector<ModelConfig> out;
    for (int d : ds)
        for (int p : ps)
            for (int q : qs) out.emplace_back(ArimaOrder{p, d, q});
    return out;
}

std::vector<ModelConfig> sarima_grid(const std::vector<int>& ps, const std::vector<int>& ds,
                                     const std::vector<int>& qs, const std::vector<int>& Ps,
                                     const std::vector<int>& Ds, const std::vector<int>& Qs, int s) {
    std::vector<ModelConfig> out;
    for (int d : ds)
        for (int D : Ds)
            for (int p : ps)
                for (int q : qs)
                    for (int P : Ps)
                        for (int Q : Qs) {
                            SarimaOrder o{{p, d, q}, P, D, Q, s};
                            try {
                                o.validate();
                            } catch (const Error&) {
                                continue;
                            }
                            out.emplace_back(o);
                        }
    return out;
}

std::vector<ModelConfig> holt_grid(double step, const std::vector<double>& phis) {
    if (!(step > 0.0 && step < 1.0)) throw Error(ErrorKind::Domain, "Holt lattice step must lie in (0, 1)");
    std::vector<double> lattice;
    for (int k = 1;; ++k) {
        const double v = std::round(k * step * 1e9) / 1e9;
        if (v >= 1.0 - 1e-12) break;
        lattice.push_back(v);
    }
    std::vector<ModelConfig> out;
    for (double phi : phis)
        for (double alpha : lattice)
            for (double beta : lattice) {
                HoltCandidate c;
                c.params = HoltParams{alpha, beta, phi, 1, 0.0};
                out.emplace_back(std::move(c));
            }
    return out;
}

std::vector<ModelConfig> default_arima_grid() { return arima_grid({0, 1, 2}, {0, 1, 2}, {0, 1, 2}); }

std::vector<ModelConfig> default_sarima_grid(int s) {
    return sarima_grid({0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1}, {0, 1, 2}, s);
}

std::vector<ModelConfig> default_holt_grid() { return holt_grid(0.05, {0.8, 0.9, 0.98, 1.0}); }

namespace {

Metrics mean_metrics(const std::vector<Metrics>& ms) {
    Metrics out;
    double r2_sum = 0.0;
    int r2_count = 0;
    for (const auto& m : ms) {
        out.mae += m.mae;
        out.rmse += m.rmse;
        out.mape += m.mape;
        if (m.r2) {
            r2_sum += *m.r2;
            ++r2_count;
        }
    }
    const double n = static_cast<double>(ms.size());
    out.mae /= n;
    out.rmse /= n;
    out.mape /= n;
    if (r2_count > 0) out.r2 = r2_sum / r2_count;
    return out;
}

std::span<const double> tail_values(const AnnualSeries& s, std::size_t from, std::size_t count) {
    return std::span<const double>(s.values).subspan(from, count);
}

// Lexicographic metric key shared by grid search and select_best.
bool metric_less(const Metrics& a, const Metrics& b) {
    if (a.rmse != b.rmse) return a.rmse < b.rmse;
    if (a.mae != b.mae) return a.mae < b.mae;
    return a.mape < b.mape;
}

bool metric_equal(const Metrics& a, const Metrics& b) {
    return a.rmse == b.rmse && a.mae == b.mae && a.mape == b.mape;
}

}  // namespace

CvReport rolling_origin_cv(const AnnualSeries& series, const ModelConfig& config, int min_train, int horizon,
                           const FitOptions& options) {
    const int n = static_cast<int>(series.size());
    if (min_train < 1 || horizon < 1 || min_train + horizon > n) {
        throw Error(ErrorKind::Domain, fmt::format("no feasible origin for min_train={}, horizon={}, n={}", min_train,
                                                   horizon, n));
    }
    CvReport report;
    std::vector<Metrics> ok;
    for (int t = min_train; t <= n - horizon; ++t) {
        CvFold fold;
        fold.train_end_year = series.year_at(static_cast<std::size_t>(t - 1));
        fold.horizon = horizon;
        try {
            const auto model = fit_model(series.slice(0, static_cast<std::size_t>(t)), config, options);
            const auto pred = point_forecast(model, horizon);
            fold.metrics =
                compute_metrics(tail_values(series, static_cast<std::size_t>(t), static_cast<std::size_t>(horizon)), pred);
            ok.push_back(*fold.metrics);
        } catch (const Error& e) {
            fold.error = e.what();
            ++report.failed_folds;
        }
        report.folds.push_back(std::move(fold));
    }
    if (!ok.empty()) report.aggregate = mean_metrics(ok);
    return report;
}

ResidualDiagnostics residual_diagnostics(const FittedModel& model) {
    ResidualDiagnostics d;
    const auto& r = model.residuals;
    const std::size_t n = r.size();
    if (n >= 3) {
        d.ljung_box_lag = static_cast<int>(std::clamp<std::size_t>(std::min<std::size_t>(10, n / 5), 1, n - 1));
        const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
        double c0 = 0.0;
        for (double v : r) c0 += (v - mean) * (v - mean);
        if (c0 > 0.0) {
            const double nd = static_cast<double>(n);
            double q = 0.0;
            for (int k = 1; k <= d.ljung_box_lag; ++k) {
                double ck = 0.0;
                for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
                    ck += (r[t] - mean) * (r[t - static_cast<std::size_t>(k)] - mean);
                }
                const double rho = ck / c0;
                q += rho * rho / (nd - k);
            }
            d.ljung_box_q = nd * (nd + 2.0) * q;
            boost::math::chi_squared_distribution<double> chi2(d.ljung_box_lag);
            d.ljung_box_p = boost::math::cdf(boost::math::complement(chi2, d.ljung_box_q));
            d.residual_autocorrelation = d.ljung_box_p < 0.05;
        }
    }
    if (!model.history.empty()) {
        const auto ten = point_forecast(model, 10);
        d.divergent = ten.back() > 3.0 * model.history.back();
    }
    return d;
}

BenchmarkRow grid_search(const AnnualSeries& series, ModelFamily family, const std::vector<ModelConfig>& grid,
                         const GridSearchOptions& options) {
    if (grid.empty()) throw Error(ErrorKind::Domain, "grid search needs at least one config");
    for (const auto& c : grid) {
        if (family_of(c) != family) {
            throw Error(ErrorKind::Domain,
                        fmt::format("config {} does not belong to family {}", describe(c), to_string(family)));
        }
    }
    const auto split = chrono_split(series, options.train_fraction);
    const auto test_len = static_cast<int>(split.test.size());

    struct Outcome {
        std::optional<Metrics> metrics;
        std::vector<double> forecast;
        std::string error;
    };
    std::vector<Outcome> outcomes(grid.size());
    const auto evaluate = [&](std::size_t i) {
        try {
            const auto model = fit_model(split.train, grid[i], options.fit);
            auto pred = point_forecast(model, test_len);
            outcomes[i].metrics = compute_metrics(split.test.values, pred);
            outcomes[i].forecast = std::move(pred);
        } catch (const Error& e) {
            outcomes[i].error = e.what();
        }
    };

    // Results land in per-index slots, so the ranking never depends on
    // scheduling.
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(grid.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < grid.size(); i = next++) evaluate(i);
            });
        }
    }

    BenchmarkRow row;
    row.family = family;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.metrics) {
            row.skipped.push_back({describe(grid[i]), o.error});
            continue;
        }
        ++row.configs_evaluated;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = *outcomes[*best].metrics;
        if (metric_less(*o.metrics, b) ||
            (metric_equal(*o.metrics, b) && parameter_count(grid[i]) < parameter_count(grid[*best]))) {
            best = i;
        }
    }
    if (!best) {
        std::string causes;
        for (const auto& s : row.skipped) causes += fmt::format("\n  {}: {}", s.config, s.reason);
        throw Error(ErrorKind::ExhaustiveFailure,
                    fmt::format("all {} {} configs failed:{}", grid.size(), to_string(family), causes));
    }

    row.config = grid[*best];
    row.test_metrics = *outcomes[*best].metrics;
    row.test_forecast = outcomes[*best].forecast;
    row.diagnostics = residual_diagnostics(fit_model(split.train, row.config, options.fit));
    const int min_train = options.cv_min_train > 0 ? options.cv_min_train : static_cast<int>(split.train.size());
    row.cv = rolling_origin_cv(series, row.config, min_train, options.cv_horizon, options.fit);
    return row;
}

std::vector<BenchmarkRow> select_best(std::vector<BenchmarkRow> rows) {
    if (rows.empty()) throw Error(ErrorKind::Domain, "select_best needs at least one row");
    std::stable_sort(rows.begin(), rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
        if (!metric_equal(a.test_metrics, b.test_metrics)) return metric_less(a.test_metrics, b.test_metrics);
        const int pa = parameter_count(a.config);
        const int pb = parameter_count(b.config);
        if (pa != pb) return pa < pb;
        if (a.family != b.family) return a.family < b.family;
        return describe(a.config) < describe(b.config);
    });
    return rows;
}

}  // namespace co2cast
