#include "co2cast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "co2cast/error.hpp"

namespace co2cast {

std::string_view to_string(OutlierMethod method) {
    return method == OutlierMethod::Zscore ? "zscore" : "iqr";
}

AnnualSeries interpolate_missing(const AnnualSeries& series) {
    AnnualSeries out = series;
    const std::size_t n = out.size();
    std::size_t i = 0;
    while (i < n) {
        if (!has_flag(out.flags[i], ObsFlag::Missing)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && has_flag(out.flags[j], ObsFlag::Missing)) ++j;
        if (i == 0 || j == n) {
            throw Error(ErrorKind::UnfillableGap,
                        fmt::format("series {}: gap at {} has no known neighbour on both sides; trim the series",
                                    series.country, series.year_at(i)));
        }
        const double left = out.values[i - 1];
        const double right = out.values[j];
        const double span = static_cast<double>(j - (i - 1));
        for (std::size_t k = i; k < j; ++k) {
            const double frac = static_cast<double>(k - (i - 1)) / span;
            out.values[k] = left + (right - left) * frac;
            out.flags[k] = static_cast<FlagSet>((out.flags[k] & ~flag_bit(ObsFlag::Missing)) |
                                                flag_bit(ObsFlag::Interpolated));
        }
        i = j;
    }
    return out;
}

double quantile_type7(std::span<const double> values, double prob) {
    if (values.empty()) throw Error(ErrorKind::Domain, "quantile of empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

OutlierReport detect_outliers(const AnnualSeries& series, OutlierMethod method, const OutlierOptions& options) {
    const auto& x = series.values;
    const std::size_t n = x.size();
    if (n < 4) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("outlier detection needs at least 4 observations, got {}", n));
    }
    if (series.has_gaps()) {
        throw Error(ErrorKind::Domain, "outlier detection requires a gap-free series; interpolate first");
    }

    OutlierReport report;
    report.method = method;
    if (method == OutlierMethod::Zscore) {
        report.threshold = options.zscore_threshold;
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        report.lower_fence = mean - options.zscore_threshold * sd;
        report.upper_fence = mean + options.zscore_threshold * sd;
        if (!(sd > 0.0)) return report;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (x[i] - mean) / sd;
            if (std::abs(z) > options.zscore_threshold) {
                report.indices.push_back(i);
                report.scores.push_back(z);
            }
        }
    } else {
        const double q1 = quantile_type7(x, 0.25);
        const double q3 = quantile_type7(x, 0.75);
        const double iqr = q3 - q1;
        report.threshold = options.iqr_multiplier;
        report.lower_fence = q1 - options.iqr_multiplier * iqr;
        report.upper_fence = q3 + options.iqr_multiplier * iqr;
        for (std::size_t i = 0; i < n; ++i) {
            const double excess = x[i] > report.upper_fence   ? x[i] - report.upper_fence
                                  : x[i] < report.lower_fence ? x[i] - report.lower_fence
                                                              : 0.0;
            if (excess != 0.0) {
                report.indices.push_back(i);
                report.scores.push_back(iqr > 0.0 ? excess / iqr : excess);
            }
        }
    }
    return report;
}

AnnualSeries annotate_outliers(const AnnualSeries& series, const OutlierReport& report) {
    AnnualSeries out = series;
    const auto bit = flag_bit(report.method == OutlierMethod::Zscore ? ObsFlag::OutlierZscore : ObsFlag::OutlierIqr);
    for (std::size_t idx : report.indices) {
        if (idx >= out.size()) throw Error(ErrorKind::Domain, "outlier index out of range");
        out.flags[idx] = static_cast<FlagSet>(out.flags[idx] | bit);
    }
    return out;
}

std::vector<double> difference(std::span<const double> values, int d) {
    if (d < 0) throw Error(ErrorKind::Domain, "differencing order must be non-negative");
    if (static_cast<std::size_t>(d) >= values.size() && d > 0) {
        throw Error(ErrorKind::Domain,
                    fmt::format("differencing order {} needs more than {} observations", d, values.size()));
    }
    std::vector<double> out(values.begin(), values.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

}  // namespace co2cast
