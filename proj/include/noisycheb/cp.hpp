#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "noisycheb/cheb.hpp"
#include "noisycheb/matrix.hpp"

namespace noisycheb {

/// Result of a Mallows' Cp sweep over candidate degrees 0..nbar.
struct CpScan {
    int nbar = 0;
    double sigma_hat_sq = 0.0;
    std::vector<double> cp_values;  // cp_values[l] = Cp(l), l = 0..nbar
    int selected = 0;               // smallest argmin of cp_values
};

inline int default_nbar(int num_intervals) { return (num_intervals + 1) / 2; }

/// Residual-based noise variance estimate from the tail coefficients:
///   sigma^2_hat = N / (2 (N - nbar)) * (|c_{nbar+1:N}|^2 + c_N^2).
inline double sigma_hat_sq(const ChebSeries& coeffs, int nbar) {
    const int n_intervals = coeffs.degree();
    if (nbar < 0 || nbar >= n_intervals) {
        throw std::invalid_argument("sigma_hat_sq: need 0 <= nbar < N");
    }
    const auto& c = coeffs.coeffs;
    double tail = c[n_intervals] * c[n_intervals];  // the extra c_N^2 term
    for (int j = n_intervals; j > nbar; --j) tail += c[j] * c[j];
    return static_cast<double>(n_intervals) / (2.0 * (n_intervals - nbar)) * tail;
}

namespace detail {
inline double cp_penalty(int ell, int n_intervals) {
    return ell + 1 - (2.0 * ell + 1.0) / (2.0 * n_intervals);
}
}  // namespace detail

/// Cp(l) for every l = 0..nbar in one reverse pass of suffix sums:
///   Cp(l) = N/2 (|c_{l+1:N}|^2 + c_N^2) + 2 sigma^2_hat (l+1 - (2l+1)/(2N)).
/// Ties in the argmin resolve to the smallest degree.
inline CpScan cp_scan(const ChebSeries& coeffs, int nbar) {
    const int n_intervals = coeffs.degree();
    if (nbar < 1 || nbar >= n_intervals) {
        throw std::invalid_argument("cp_scan: need 1 <= nbar < N");
    }
    const auto& c = coeffs.coeffs;

    CpScan scan;
    scan.nbar = nbar;
    scan.sigma_hat_sq = sigma_hat_sq(coeffs, nbar);
    scan.cp_values.resize(static_cast<std::size_t>(nbar) + 1);

    const double extra = c[n_intervals] * c[n_intervals];
    double suffix = 0.0;
    for (int j = n_intervals; j > nbar; --j) suffix += c[j] * c[j];
    for (int ell = nbar; ell >= 0; --ell) {
        scan.cp_values[ell] = 0.5 * n_intervals * (suffix + extra) +
                              2.0 * scan.sigma_hat_sq * detail::cp_penalty(ell, n_intervals);
        if (ell > 0) suffix += c[ell] * c[ell];
    }

    scan.selected = 0;
    for (int ell = 1; ell <= nbar; ++ell) {
        if (scan.cp_values[ell] < scan.cp_values[scan.selected]) scan.selected = ell;
    }
    return scan;
}

/// Direct single-degree evaluation of Cp(l); cross-checks the suffix-sum scan.
inline double cp_value(const ChebSeries& coeffs, int nbar, int ell) {
    const int n_intervals = coeffs.degree();
    if (nbar < 0 || nbar >= n_intervals) {
        throw std::invalid_argument("cp_value: need 0 <= nbar < N");
    }
    if (ell < 0 || ell > nbar) throw std::invalid_argument("cp_value: need 0 <= ell <= nbar");
    const auto& c = coeffs.coeffs;
    double tail = c[n_intervals] * c[n_intervals];
    for (int j = n_intervals; j > ell; --j) tail += c[j] * c[j];
    return 0.5 * n_intervals * tail + 2.0 * sigma_hat_sq(coeffs, nbar) * detail::cp_penalty(ell, n_intervals);
}

/// Cp for a general linear estimate mu_hat = B y under the weighted loss
/// |.|_M with diagonal M:
///   Cp = |mu_hat - y|_M^2 + sigma^2_hat tr(M (B + B^T)).
/// Dense test fixture for the unbiasedness property; not a production path.
inline double generalized_cp(std::span<const double> y,
                             std::span<const double> mu_hat,
                             double sigma_hat_sq_value,
                             const Matrix& b,
                             std::span<const double> m_diag) {
    const int dim = static_cast<int>(y.size());
    if (mu_hat.size() != y.size() || m_diag.size() != y.size() ||
        b.rows != dim || b.cols != dim) {
        throw std::invalid_argument("generalized_cp: dimension mismatch");
    }
    for (double m : m_diag) {
        if (m <= 0.0) throw std::invalid_argument("generalized_cp: M must be positive definite");
    }

    double loss = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = mu_hat[i] - y[i];
        loss += m_diag[i] * d * d;
    }
    // tr(M (B + B^T)) = 2 tr(M B) for diagonal M.
    double trace = 0.0;
    for (int i = 0; i < dim; ++i) trace += m_diag[i] * b(i, i);
    return loss + sigma_hat_sq_value * 2.0 * trace;
}

}  // namespace noisycheb
