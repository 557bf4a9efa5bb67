#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisycheb/fft.hpp"

namespace noisycheb {

/// Chebyshev extrema grid x_i = cos(i pi / N), i = 0..N, stored descending
/// (x_0 = 1, x_N = -1). Treat as immutable after construction.
struct ChebGrid {
    int num_intervals = 0;          // N
    std::vector<double> points;     // N+1 points, descending
};

/// Finite Chebyshev series p(x) = sum_{j=0}^{n} coeffs[j] T_j(x).
struct ChebSeries {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    bool all_finite() const {
        for (double c : coeffs) {
            if (!std::isfinite(c)) return false;
        }
        return true;
    }
};

/// Builds the N+1 point grid. Endpoints are exactly +-1 and the midpoint of
/// an even grid is exactly 0; the negative half mirrors the positive half so
/// points[i] == -points[N-i] holds by construction.
inline ChebGrid make_grid(int num_intervals) {
    if (num_intervals < 1) throw std::invalid_argument("make_grid: N must be >= 1");
    const int n = num_intervals;
    std::vector<double> pts(static_cast<std::size_t>(n) + 1);
    pts[0] = 1.0;
    pts[n] = -1.0;
    for (int i = 1; i < n - i; ++i) {
        const double x = std::cos(static_cast<double>(i) * std::numbers::pi / static_cast<double>(n));
        pts[i] = x;
        pts[n - i] = -x;
    }
    if (n % 2 == 0) pts[n / 2] = 0.0;
    return ChebGrid{n, std::move(pts)};
}

/// Interpolation transform: values at the N+1 Chebyshev points to the
/// coefficients of the unique degree-N interpolant. DCT-I based, O(N log N).
/// Non-finite inputs propagate into the coefficients (no masking); check
/// ChebSeries::all_finite().
inline ChebSeries values_to_coeffs(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("values_to_coeffs: need at least two samples");
    const std::size_t n = values.size() - 1;
    std::vector<double> c = detail::dct1(values);
    const double scale = 2.0 / static_cast<double>(n);
    for (double& cj : c) cj *= scale;
    c.front() *= 0.5;
    c.back() *= 0.5;
    return ChebSeries{std::move(c)};
}

/// Evaluates the series on make_grid(N).points. Exact inverse of
/// values_to_coeffs when degree == N; lower-degree series are resampled.
inline std::vector<double> coeffs_to_values(const ChebSeries& series, int num_intervals) {
    if (series.coeffs.empty()) throw std::invalid_argument("coeffs_to_values: empty series");
    if (num_intervals < 1) throw std::invalid_argument("coeffs_to_values: N must be >= 1");
    if (series.degree() > num_intervals) {
        throw std::invalid_argument("coeffs_to_values: series degree exceeds N (would alias)");
    }
    std::vector<double> b(static_cast<std::size_t>(num_intervals) + 1, 0.0);
    std::copy(series.coeffs.begin(), series.coeffs.end(), b.begin());
    b.front() *= 2.0;
    b.back() *= 2.0;
    return detail::dct1(b);
}

/// Clenshaw recurrence for sum c_j T_j(x). Values of |x| > 1 are permitted
/// but are extrapolation; the polynomial grows rapidly off the interval.
inline double evaluate(const ChebSeries& series, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("evaluate: x must be finite");
    if (series.coeffs.empty()) throw std::invalid_argument("evaluate: empty series");
    const auto& c = series.coeffs;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size() - 1; j >= 1; --j) {
        const double b0 = 2.0 * x * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c[0];
}

inline std::vector<double> evaluate_many(const ChebSeries& series, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = evaluate(series, xs[i]);
    return out;
}

/// Keeps c_0..c_n unchanged; no re-fitting.
inline ChebSeries truncate(const ChebSeries& series, int n) {
    if (n < 0 || n > series.degree()) {
        throw std::invalid_argument("truncate: degree out of range");
    }
    return ChebSeries{std::vector<double>(series.coeffs.begin(), series.coeffs.begin() + n + 1)};
}

}  // namespace noisycheb
