#pragma once

// Test-only reference implementations, kept independent of the fast
// transform path they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace testref {

/// O(N^2) direct evaluation of c_j = (2/N) sum''_i v_i cos(i j pi / N) with
/// c_0 and c_N halved. The cosine argument is reduced mod 2N in integers.
inline std::vector<double> direct_values_to_coeffs(std::span<const double> values) {
    const int n = static_cast<int>(values.size()) - 1;
    std::vector<double> c(values.size());
    for (int j = 0; j <= n; ++j) {
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            const long m = static_cast<long>(i) * j % (2L * n);
            acc += w * values[i] * std::cos(std::numbers::pi * static_cast<double>(m) / n);
        }
        c[j] = 2.0 / n * acc;
    }
    c.front() *= 0.5;
    c.back() *= 0.5;
    return c;
}

/// Direct trigonometric evaluation sum_j c_j cos(j arccos x) for |x| <= 1.
inline double direct_evaluate(std::span<const double> coeffs, double x) {
    const double theta = std::acos(x);
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        acc += coeffs[j] * std::cos(static_cast<double>(j) * theta);
    }
    return acc;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double max_abs(std::span<const double> a) {
    double worst = 0.0;
    for (double v : a) worst = std::max(worst, std::abs(v));
    return worst;
}

/// Relative infinity-norm distance: max|a-b| / max|b|.
inline double rel_inf_diff(std::span<const double> a, std::span<const double> b) {
    return max_abs_diff(a, b) / max_abs(b);
}

}  // namespace testref
