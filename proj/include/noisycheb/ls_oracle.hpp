#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisycheb/cheb.hpp"
#include "noisycheb/matrix.hpp"

namespace noisycheb {

/// Chebyshev-Vandermonde matrix on make_grid(N): entries(i, j) = T_j(x_i).
struct ChebVandermonde {
    int num_intervals = 0;  // N
    int degree = 0;         // n
    Matrix entries;         // (N+1) x (n+1)
};

/// The diagonal of D = diag(1/sqrt(2), 1, ..., 1, 1/sqrt(2)).
struct WeightMatrix {
    std::vector<double> diagonal;
};

inline WeightMatrix make_weight_matrix(int num_intervals) {
    if (num_intervals < 1) throw std::invalid_argument("make_weight_matrix: N must be >= 1");
    WeightMatrix w{std::vector<double>(static_cast<std::size_t>(num_intervals) + 1, 1.0)};
    w.diagonal.front() = 1.0 / std::numbers::sqrt2;
    w.diagonal.back() = 1.0 / std::numbers::sqrt2;
    return w;
}

inline constexpr int kDenseOracleCap = 4096;

/// Columns filled by the three-term recurrence T_{j+1} = 2x T_j - T_{j-1}.
inline ChebVandermonde build_vandermonde(int num_intervals, int degree) {
    if (degree < 0 || degree > num_intervals || num_intervals > kDenseOracleCap) {
        throw std::invalid_argument("build_vandermonde: need 0 <= n <= N <= 4096");
    }
    const ChebGrid grid = make_grid(num_intervals);
    const int rows = num_intervals + 1;
    Matrix t(rows, degree + 1);
    for (int i = 0; i < rows; ++i) {
        const double x = grid.points[i];
        t(i, 0) = 1.0;
        if (degree >= 1) t(i, 1) = x;
        for (int j = 2; j <= degree; ++j) t(i, j) = 2.0 * x * t(i, j - 1) - t(i, j - 2);
    }
    return ChebVandermonde{num_intervals, degree, std::move(t)};
}

/// argmin_c |D (T c - y)|_2 for n < N. The weighted normal matrix is exactly
/// (N/2) diag(2, 1, ..., 1), so the solve is a diagonal scaling of T^T D^2 y.
inline std::vector<double> solve_weighted_ls(std::span<const double> values, int degree) {
    const int n_intervals = static_cast<int>(values.size()) - 1;
    if (values.size() < 2) throw std::invalid_argument("solve_weighted_ls: need at least two samples");
    if (degree < 0 || degree >= n_intervals) {
        throw std::invalid_argument("solve_weighted_ls: need 0 <= n < N");
    }
    const ChebVandermonde vand = build_vandermonde(n_intervals, degree);
    const WeightMatrix w = make_weight_matrix(n_intervals);

    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int j = 0; j <= degree; ++j) {
        double dot = 0.0;
        for (int i = 0; i <= n_intervals; ++i) {
            const double d2 = w.diagonal[i] * w.diagonal[i];
            dot += vand.entries(i, j) * d2 * values[i];
        }
        const double inv_normal = (j == 0 ? 1.0 : 2.0) / static_cast<double>(n_intervals);
        c[j] = inv_normal * dot;
    }
    return c;
}

namespace detail {

/// Householder QR least squares for a dense column-independent system.
/// Throws on numerical rank deficiency.
inline std::vector<double> householder_lstsq(Matrix a, std::vector<double> b) {
    const int m = a.rows;
    const int n = a.cols;
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < m; ++i) norm = std::hypot(norm, a(i, k));
        if (norm == 0.0) throw std::runtime_error("householder_lstsq: rank deficient");
        if (a(k, k) > 0.0) norm = -norm;
        for (int i = k; i < m; ++i) a(i, k) /= norm;
        a(k, k) -= 1.0;
        // Apply I - v v^T / (-a(k,k)) to the trailing columns and to b.
        for (int j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += a(i, k) * a(i, j);
            s /= a(k, k);
            for (int i = k; i < m; ++i) a(i, j) += s * a(i, k);
        }
        double s = 0.0;
        for (int i = k; i < m; ++i) s += a(i, k) * b[i];
        s /= a(k, k);
        for (int i = k; i < m; ++i) b[i] += s * a(i, k);
        a(k, k) = norm;  // R diagonal
    }

    double max_diag = 0.0;
    for (int k = 0; k < n; ++k) max_diag = std::max(max_diag, std::abs(a(k, k)));
    std::vector<double> x(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        if (std::abs(a(k, k)) < 1e-13 * max_diag) {
            throw std::runtime_error("householder_lstsq: rank deficient");
        }
        double s = b[k];
        for (int j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

}  // namespace detail

/// argmin_c |T c - y|_2 via QR; the comparison baseline for the weighted
/// solver. n = N gives the square interpolation system.
inline std::vector<double> solve_unweighted_ls(std::span<const double> values, int degree) {
    const int n_intervals = static_cast<int>(values.size()) - 1;
    if (values.size() < 2) throw std::invalid_argument("solve_unweighted_ls: need at least two samples");
    if (degree < 0 || degree > n_intervals) {
        throw std::invalid_argument("solve_unweighted_ls: need 0 <= n <= N");
    }
    ChebVandermonde vand = build_vandermonde(n_intervals, degree);
    return detail::householder_lstsq(std::move(vand.entries),
                                     std::vector<double>(values.begin(), values.end()));
}

/// The sampling vector s(x) = D^2 T (T^T D^2 T)^{-1} t(x), so that the
/// degree-n weighted-LS fit evaluates as p_n(x) = s(x)^T y.
inline std::vector<double> sampling_vector(double x, int degree, int num_intervals) {
    if (degree < 0 || degree >= num_intervals) {
        throw std::invalid_argument("sampling_vector: need 0 <= n < N");
    }
    const ChebVandermonde vand = build_vandermonde(num_intervals, degree);
    const WeightMatrix w = make_weight_matrix(num_intervals);

    // t(x) scaled by the inverse normal matrix (2/N) diag(1/2, 1, ..., 1).
    std::vector<double> tx(static_cast<std::size_t>(degree) + 1);
    tx[0] = 1.0;
    if (degree >= 1) tx[1] = x;
    for (int j = 2; j <= degree; ++j) tx[j] = 2.0 * x * tx[j - 1] - tx[j - 2];
    for (int j = 0; j <= degree; ++j) {
        tx[j] *= (j == 0 ? 1.0 : 2.0) / static_cast<double>(num_intervals);
    }

    std::vector<double> s(static_cast<std::size_t>(num_intervals) + 1, 0.0);
    for (int i = 0; i <= num_intervals; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= degree; ++j) acc += vand.entries(i, j) * tx[j];
        s[i] = w.diagonal[i] * w.diagonal[i] * acc;
    }
    return s;
}

}  // namespace noisycheb
