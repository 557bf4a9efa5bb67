#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace noisycheb::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

/// In-place radix-2 Cooley-Tukey transform. Length must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Twiddles computed directly per index; no recurrence drift.
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        w[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[base + k];
                const std::complex<double> v = a[base + k + len / 2] * w[k * stride];
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

/// Bluestein chirp-z transform for arbitrary lengths; delegates to the
/// radix-2 kernel on a padded cyclic convolution.
inline void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;

    // e^{-i pi m^2 / n}; m^2 is reduced mod 2n so the angle stays small.
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t m = 0; m < n; ++m) {
        const std::uint64_t m2 = (static_cast<std::uint64_t>(m) * m) % period;
        chirp[m] = std::polar(1.0, -std::numbers::pi * static_cast<double>(m2) / static_cast<double>(n));
    }
    if (inverse) {
        for (auto& z : chirp) z = std::conj(z);
    }

    const std::size_t m_len = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> fa(m_len), fb(m_len);
    for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        fb[k] = std::conj(chirp[k]);
        fb[m_len - k] = std::conj(chirp[k]);
    }

    fft_radix2(fa, false);
    fft_radix2(fb, false);
    for (std::size_t k = 0; k < m_len; ++k) fa[k] *= fb[k];
    fft_radix2(fa, true);

    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k];
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
    if (is_pow2(a.size())) {
        fft_radix2(a, inverse);
    } else {
        fft_bluestein(a, inverse);
    }
}

/// DCT-I core used by both transform directions:
///   out[j] = sum''_{i=0..N} a[i] cos(i j pi / N),   j = 0..N,
/// where sum'' halves the i=0 and i=N terms. Computed as the real FFT of
/// the even extension of length 2N, so the cost is O(N log N) for any N.
inline std::vector<double> dct1(std::span<const double> a) {
    if (a.size() < 2) throw std::invalid_argument("dct1: need at least two points");
    const std::size_t n_intervals = a.size() - 1;

    std::vector<std::complex<double>> buf(2 * n_intervals);
    for (std::size_t i = 0; i <= n_intervals; ++i) buf[i] = a[i];
    for (std::size_t i = 1; i < n_intervals; ++i) buf[2 * n_intervals - i] = a[i];

    fft(buf, false);

    std::vector<double> out(n_intervals + 1);
    for (std::size_t j = 0; j <= n_intervals; ++j) out[j] = 0.5 * buf[j].real();
    return out;
}

}  // namespace noisycheb::detail
