#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noisycheb/cheb.hpp"
#include "noisycheb/cp.hpp"
#include "noisycheb/rng.hpp"

namespace noisycheb {

enum class NoiseKind { none, gaussian, uniform, laplace, cauchy };

/// Subexponential MGF parameters (nu, alpha).
struct SubexpParams {
    double nu = 0.0;
    double alpha = 0.0;
};

/// Tagged noise distribution. `scale` is sigma for gaussian, the half-width
/// for uniform, the diversity b for laplace and gamma for cauchy.
struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double scale = 0.0;

    static NoiseModel none() { return {NoiseKind::none, 0.0}; }
    static NoiseModel gaussian(double sigma) { return checked(NoiseKind::gaussian, sigma); }
    static NoiseModel uniform(double half_width) { return checked(NoiseKind::uniform, half_width); }
    static NoiseModel laplace(double b) { return checked(NoiseKind::laplace, b); }
    static NoiseModel cauchy(double gamma) { return checked(NoiseKind::cauchy, gamma); }

    double variance() const {
        switch (kind) {
            case NoiseKind::none: return 0.0;
            case NoiseKind::gaussian: return scale * scale;
            case NoiseKind::uniform: return scale * scale / 3.0;
            case NoiseKind::laplace: return 2.0 * scale * scale;
            case NoiseKind::cauchy: return std::numeric_limits<double>::quiet_NaN();
        }
        return 0.0;
    }

    bool is_subgaussian() const {
        return kind == NoiseKind::none || kind == NoiseKind::gaussian || kind == NoiseKind::uniform;
    }
    bool is_subexponential() const { return kind == NoiseKind::laplace; }
    bool is_heavy_tailed() const { return kind == NoiseKind::cauchy; }

    /// Subgaussian MGF parameter: sigma for gaussian, the half-width for a
    /// bounded uniform (Hoeffding).
    double subgaussian_sigma() const {
        if (!is_subgaussian()) throw std::invalid_argument("noise is not subgaussian");
        return scale;
    }

    /// Laplace(b) is subexponential with (nu, alpha) = (sqrt(2) b, b).
    SubexpParams subexponential_params() const {
        if (kind != NoiseKind::laplace) throw std::invalid_argument("noise is not subexponential");
        return {std::numbers::sqrt2 * scale, scale};
    }

    double draw(CounterRng& rng) const {
        switch (kind) {
            case NoiseKind::none: return 0.0;
            case NoiseKind::gaussian: return scale * rng.next_gaussian();
            case NoiseKind::uniform: return scale * (2.0 * rng.next_unit() - 1.0);
            case NoiseKind::laplace: {
                const double v = rng.next_unit() - 0.5;
                return -scale * std::copysign(1.0, v) * std::log1p(-2.0 * std::abs(v));
            }
            case NoiseKind::cauchy:
                return scale * std::tan(std::numbers::pi * (rng.next_unit() - 0.5));
        }
        return 0.0;
    }

private:
    static NoiseModel checked(NoiseKind kind, double scale) {
        if (!(scale > 0.0)) throw std::invalid_argument("NoiseModel: scale must be positive");
        return {kind, scale};
    }
};

/// A target f : [-1,1] -> R. Built-ins cover the experiment suite; custom
/// callables enter through the same contract.
struct TargetFunction {
    std::string name;
    std::function<double(double)> fn;

    double operator()(double x) const { return fn(x); }

    static TargetFunction runge() {
        return {"runge", [](double x) { return 1.0 / (25.0 * x * x + 1.0); }};
    }
    static TargetFunction abs() {
        return {"abs", [](double x) { return std::abs(x); }};
    }
    static TargetFunction abs3() {
        return {"abs3", [](double x) { return std::abs(x) * x * x; }};
    }
    static TargetFunction custom(std::string name, std::function<double(double)> fn) {
        return {std::move(name), std::move(fn)};
    }
    static TargetFunction by_name(const std::string& name) {
        if (name == "runge") return runge();
        if (name == "abs") return abs();
        if (name == "abs3") return abs3();
        throw std::invalid_argument("unknown target function: " + name);
    }
};

/// Full output of one run: the degree-N interpolant, the Cp sweep and the
/// truncated series.
struct FitResult {
    ChebSeries full_coeffs;
    int selected_degree = 0;
    ChebSeries truncated;
    double sigma_hat_sq = 0.0;
    CpScan cp_curve;
    std::uint64_t seed = 0;
    int num_intervals = 0;
};

/// y_i = f(x_i) + eps_i at the N+1 Chebyshev points, noise drawn from the
/// seeded counter generator. Same (f, noise, N, seed) reproduces bitwise
/// within a build.
inline std::vector<double> sample(const TargetFunction& f, const NoiseModel& noise,
                                  int num_intervals, std::uint64_t seed) {
    if (num_intervals < 2) throw std::invalid_argument("sample: N must be >= 2");
    const ChebGrid grid = make_grid(num_intervals);
    CounterRng rng(mix64(seed));
    std::vector<double> y(grid.points.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(grid.points[i]) + noise.draw(rng);
    return y;
}

/// Interpolate, sweep Cp, truncate. O(N log N) total.
inline FitResult fit(std::span<const double> values, std::optional<int> nbar = std::nullopt) {
    if (values.size() < 3) throw std::invalid_argument("fit: need at least three samples");
    const int n_intervals = static_cast<int>(values.size()) - 1;
    const int cap = nbar.value_or(default_nbar(n_intervals));

    FitResult result;
    result.num_intervals = n_intervals;
    result.full_coeffs = values_to_coeffs(values);
    result.cp_curve = cp_scan(result.full_coeffs, cap);
    result.selected_degree = result.cp_curve.selected;
    result.sigma_hat_sq = result.cp_curve.sigma_hat_sq;
    result.truncated = truncate(result.full_coeffs, result.selected_degree);
    return result;
}

inline FitResult fit_function(const TargetFunction& f, const NoiseModel& noise, int num_intervals,
                              std::uint64_t seed, std::optional<int> nbar = std::nullopt) {
    FitResult result = fit(sample(f, noise, num_intervals, seed), nbar);
    result.seed = seed;
    return result;
}

}  // namespace noisycheb
