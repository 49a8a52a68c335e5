#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "co2cast/preprocess.hpp"

namespace co2cast {

std::string_view to_string(StationarityTest t) { return t == StationarityTest::Adf ? "ADF" : "KPSS"; }

std::string_view to_string(Decision d) {
    return d == Decision::RejectNull ? "reject_null" : "fail_to_reject";
}

double StationarityResult::critical_at(double significance) const {
    for (const auto& cv : critical_values) {
        if (std::abs(cv.significance - significance) < 1e-12) return cv.threshold;
    }
    throw Error(ErrorKind::Domain, fmt::format("no critical value tabulated at {}", significance));
}

int default_adf_lag(std::size_t n) {
    if (n < 2) return 0;
    return static_cast<int>(std::floor(std::cbrt(static_cast<double>(n - 1)) + 1e-12));
}

namespace {

constexpr std::array<double, 3> kLevels = {0.01, 0.05, 0.10};

// MacKinnon (2010) response-surface coefficients, one row per level:
// crit(N) = b0 + b1/N + b2/N^2 + b3/N^3.
constexpr double kAdfConstant[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr double kAdfConstantTrend[3][4] = {
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
};

// Kwiatkowski et al. (1992) asymptotic table.
constexpr std::array<double, 3> kKpssLevel = {0.739, 0.463, 0.347};
constexpr std::array<double, 3> kKpssTrend = {0.216, 0.146, 0.119};

// Tabulated critical values at 1/5/10% are ordered so that a more extreme
// statistic falls below (lower tail) or above (upper tail) them.
void assign_band(StationarityResult& r, bool lower_tail) {
    const auto beyond = [&](double cv) { return lower_tail ? r.statistic < cv : r.statistic > cv; };
    if (beyond(r.critical_values[0].threshold)) {
        r.p_value_low = 0.0;
        r.p_value_high = 0.01;
    } else if (beyond(r.critical_values[1].threshold)) {
        r.p_value_low = 0.01;
        r.p_value_high = 0.05;
    } else if (beyond(r.critical_values[2].threshold)) {
        r.p_value_low = 0.05;
        r.p_value_high = 0.10;
    } else {
        r.p_value_low = 0.10;
        r.p_value_high = 1.0;
    }
    r.decision_at_5pct = beyond(r.critical_values[1].threshold) ? Decision::RejectNull : Decision::FailToReject;
}

}  // namespace

StationarityResult adf_test(std::span<const double> values, std::optional<int> lag_order, AdfRegression regression) {
    const std::size_t n = values.size();
    const int lags = lag_order.value_or(default_adf_lag(n));
    if (lags < 0) throw Error(ErrorKind::Domain, "ADF lag order must be non-negative");
    if (n < 12 + static_cast<std::size_t>(lags)) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("ADF with {} lags needs at least {} observations, got {}", lags, 12 + lags, n));
    }

    const auto dy = difference(values, 1);
    const bool trend = regression == AdfRegression::ConstantAndTrend;
    const int nobs = static_cast<int>(dy.size()) - lags;
    const int ncols = 2 + (trend ? 1 : 0) + lags;
    if (nobs <= ncols) {
        throw Error(ErrorKind::InsufficientData, "ADF regression has no residual degrees of freedom");
    }

    // Columns: lagged level, constant, [trend], lagged differences.
    Eigen::MatrixXd X(nobs, ncols);
    Eigen::VectorXd y(nobs);
    for (int r = 0; r < nobs; ++r) {
        const int t = r + lags;  // index into dy
        y(r) = dy[static_cast<std::size_t>(t)];
        int c = 0;
        X(r, c++) = values[static_cast<std::size_t>(t)];
        X(r, c++) = 1.0;
        if (trend) X(r, c++) = static_cast<double>(t + 1);
        for (int j = 1; j <= lags; ++j) X(r, c++) = dy[static_cast<std::size_t>(t - j)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < ncols) {
        throw Error(ErrorKind::DegenerateInput, "ADF regression matrix is singular");
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double s2 = resid.squaredNorm() / static_cast<double>(nobs - ncols);
    const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    const double se = std::sqrt(s2 * xtx_inv(0, 0));
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw Error(ErrorKind::DegenerateInput, "ADF regression has zero residual variance");
    }

    StationarityResult r;
    r.test = StationarityTest::Adf;
    r.statistic = beta(0) / se;
    r.lags = lags;
    r.nobs = nobs;
    const auto& table = trend ? kAdfConstantTrend : kAdfConstant;
    const double inv = 1.0 / static_cast<double>(nobs);
    for (std::size_t i = 0; i < kLevels.size(); ++i) {
        const auto& b = table[i];
        r.critical_values.push_back({kLevels[i], b[0] + b[1] * inv + b[2] * inv * inv + b[3] * inv * inv * inv});
    }
    assign_band(r, /*lower_tail=*/true);
    return r;
}

StationarityResult kpss_test(std::span<const double> values, KpssRegression regression) {
    const std::size_t n = values.size();
    if (n < 12) {
        throw Error(ErrorKind::InsufficientData, fmt::format("KPSS needs at least 12 observations, got {}", n));
    }
    const double nd = static_cast<double>(n);

    std::vector<double> e(n);
    if (regression == KpssRegression::Level) {
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / nd;
        for (std::size_t t = 0; t < n; ++t) e[t] = values[t] - mean;
    } else {
        const double tbar = (nd + 1.0) / 2.0;
        const double ybar = std::accumulate(values.begin(), values.end(), 0.0) / nd;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double dt = static_cast<double>(t + 1) - tbar;
            sxy += dt * (values[t] - ybar);
            sxx += dt * dt;
        }
        const double slope = sxy / sxx;
        for (std::size_t t = 0; t < n; ++t) {
            e[t] = values[t] - ybar - slope * (static_cast<double>(t + 1) - tbar);
        }
    }

    double partial = 0.0;
    double eta = 0.0;
    for (double v : e) {
        partial += v;
        eta += partial * partial;
    }
    eta /= nd * nd;

    const int bandwidth = static_cast<int>(std::floor(4.0 * std::pow(nd / 100.0, 0.25)));
    double lrv = 0.0;
    for (double v : e) lrv += v * v;
    for (int l = 1; l <= bandwidth && static_cast<std::size_t>(l) < n; ++l) {
        double cov = 0.0;
        for (std::size_t t = static_cast<std::size_t>(l); t < n; ++t) cov += e[t] * e[t - static_cast<std::size_t>(l)];
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (bandwidth + 1.0)) * cov;
    }
    lrv /= nd;
    if (!(lrv > 0.0)) {
        throw Error(ErrorKind::DegenerateInput, "KPSS long-run variance is zero");
    }

    StationarityResult r;
    r.test = StationarityTest::Kpss;
    r.statistic = eta / lrv;
    r.lags = bandwidth;
    r.nobs = static_cast<int>(n);
    const auto& table = regression == KpssRegression::Level ? kKpssLevel : kKpssTrend;
    for (std::size_t i = 0; i < kLevels.size(); ++i) r.critical_values.push_back({kLevels[i], table[i]});
    assign_band(r, /*lower_tail=*/false);
    return r;
}

}  // namespace co2cast
