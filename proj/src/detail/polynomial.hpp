#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace co2cast::detail {

// Lag polynomials are stored as full coefficient vectors c with c[0] = 1.

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// 1 - sum coef[i] B^{(i+1) step}
inline std::vector<double> ar_lag_poly(std::span<const double> coef, int step) {
    std::vector<double> c(coef.size() * static_cast<std::size_t>(step) + 1, 0.0);
    c[0] = 1.0;
    for (std::size_t i = 0; i < coef.size(); ++i) c[(i + 1) * static_cast<std::size_t>(step)] = -coef[i];
    return c;
}

/// 1 + sum coef[i] B^{(i+1) step}
inline std::vector<double> ma_lag_poly(std::span<const double> coef, int step) {
    std::vector<double> c(coef.size() * static_cast<std::size_t>(step) + 1, 0.0);
    c[0] = 1.0;
    for (std::size_t i = 0; i < coef.size(); ++i) c[(i + 1) * static_cast<std::size_t>(step)] = coef[i];
    return c;
}

/// (1 - B^step)^times
inline std::vector<double> difference_poly(int times, int step) {
    std::vector<double> c{1.0};
    const double one = 1.0;
    for (int k = 0; k < times; ++k) c = poly_mul(c, ar_lag_poly(std::span<const double>(&one, 1), step));
    return c;
}

/// Maps partial autocorrelations in (-1, 1) to AR coefficients of a stationary
/// polynomial 1 - sum phi_i z^i (Durbin-Levinson recursion).
inline std::vector<double> pacf_to_ar(std::span<const double> r) {
    std::vector<double> phi;
    phi.reserve(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - r[k] * phi[k - 1 - j];
        next[k] = r[k];
        phi = std::move(next);
    }
    return phi;
}

/// Inverse of pacf_to_ar (Schur-Cohn step-down). Returns nullopt when the
/// polynomial has a root on or inside the unit circle.
inline std::optional<std::vector<double>> ar_to_pacf(std::span<const double> ar) {
    std::vector<double> phi(ar.begin(), ar.end());
    std::vector<double> r(phi.size());
    for (std::size_t k = phi.size(); k-- > 0;) {
        const double rk = phi[k];
        if (!(std::abs(rk) < 1.0)) return std::nullopt;
        r[k] = rk;
        const double denom = 1.0 - rk * rk;
        std::vector<double> prev(k);
        for (std::size_t j = 0; j < k; ++j) prev[j] = (phi[j] + rk * phi[k - 1 - j]) / denom;
        phi = std::move(prev);
    }
    return r;
}

}  // namespace co2cast::detail
