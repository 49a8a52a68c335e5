#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "co2cast/models.hpp"
#include "detail/polynomial.hpp"

namespace co2cast::detail {

/// phi(B) Phi(B^s) as a full lag polynomial.
inline std::vector<double> expanded_ar_poly(const ArmaCoefficients& c, int s) {
    return poly_mul(ar_lag_poly(c.ar, 1), ar_lag_poly(c.seasonal_ar, s));
}

/// theta(B) Theta(B^s) as a full lag polynomial.
inline std::vector<double> expanded_ma_poly(const ArmaCoefficients& c, int s) {
    return poly_mul(ma_lag_poly(c.ma, 1), ma_lag_poly(c.seasonal_ma, s));
}

/// Lower bound for innovation variances, relative to the data scale. Exact
/// fits (noiseless trends, constant series) would otherwise give sigma2 = 0.
inline double variance_floor(std::span<const double> history) {
    double scale = 1.0;
    for (double v : history) scale = std::max(scale, v * v);
    return 1e-14 * scale;
}

}  // namespace co2cast::detail
