#include "noisycheb/analysis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace noisycheb;
using Catch::Approx;

TEST_CASE("inf_norm_error") {
    SECTION("near-exact truncation of f's own series") {
        const auto f = TargetFunction::runge();
        const ChebGrid g = make_grid(512);
        std::vector<double> v(g.points.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.points[i]);
        const auto report = inf_norm_error(values_to_coeffs(v), f);
        REQUIRE(report.inf_norm_error < 1e-13);
        REQUIRE(report.l2_error <= report.inf_norm_error);
    }
    SECTION("zero polynomial against runge peaks at f(0) = 1") {
        const auto report = inf_norm_error(ChebSeries{{0.0}}, TargetFunction::runge());
        REQUIRE(report.inf_norm_error == 1.0);
        REQUIRE(report.grid_size == 1001);
    }
    SECTION("grid density: doubling moves the estimate by < 1%") {
        const auto f = TargetFunction::runge();
        const auto r = fit_function(f, NoiseModel::gaussian(1e-3), 1024, 3);
        const auto base = inf_norm_error(r.truncated, f);
        // Re-measure on a grid twice as dense.
        const ChebGrid dense = make_grid(2 * (base.grid_size - 1));
        double worst = 0.0;
        for (double x : dense.points) {
            worst = std::max(worst, std::abs(f(x) - evaluate(r.truncated, x)));
        }
        REQUIRE(base.inf_norm_error == Approx(worst).epsilon(0.01));
    }
    SECTION("grid respects the 10(deg+1) floor") {
        const auto f = TargetFunction::abs();
        ChebSeries big{std::vector<double>(301, 0.0)};
        big.coeffs[0] = 1.0;
        REQUIRE(inf_norm_error(big, f).grid_size == 3011);
    }
}

TEST_CASE("residual_proxy") {
    SECTION("zero for a polynomial target once n >= degree") {
        const auto f = TargetFunction::custom(
            "poly", [](double x) { return 2.0 * x * x * x - x + 0.25; });
        const auto p = residual_proxy(f, 3);
        REQUIRE(p.converged);
        REQUIRE(p.value < 1e-13);
        REQUIRE(residual_proxy(f, 7).value < 1e-13);
    }
    SECTION("runge at n=40 sits in the 1e-4 region") {
        const auto p = residual_proxy(TargetFunction::runge(), 40);
        REQUIRE(p.converged);
        REQUIRE(p.value > 1e-5);
        REQUIRE(p.value < 1e-3);
    }
    SECTION("abs3 decays with log-log slope near -3") {
        const auto f = TargetFunction::abs3();
        std::vector<double> log_n, log_v;
        for (int n = 16; n <= 512; n *= 2) {
            log_n.push_back(std::log2(static_cast<double>(n)));
            log_v.push_back(std::log2(residual_proxy(f, n).value));
        }
        // Least-squares slope over the doublings.
        const std::size_t m = log_n.size();
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mx += log_n[i];
            my += log_v[i];
        }
        mx /= m;
        my /= m;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxy += (log_n[i] - mx) * (log_v[i] - my);
            sxx += (log_n[i] - mx) * (log_n[i] - mx);
        }
        const double slope = sxy / sxx;
        REQUIRE(slope == Approx(-3.0).margin(0.5));
    }
}

TEST_CASE("variance_bound") {
    REQUIRE(variance_bound(0, 4, 1.0) == 1.0);
    REQUIRE(variance_bound(19, 2000, 0.01) == Approx(4e-4).epsilon(1e-15));
    REQUIRE_THROWS_AS(variance_bound(4, 4, 1.0), std::invalid_argument);
}

TEST_CASE("empirical_variance") {
    SECTION("zero without noise") {
        const auto vc = empirical_variance(TargetFunction::runge(), NoiseModel::none(), 64, 8,
                                           0.3, 200, 1);
        // Identical trial values; only mean-accumulation roundoff survives.
        REQUIRE(vc.empirical < 1e-30);
        REQUIRE(vc.exact == 0.0);
    }
    SECTION("matches the closed form and respects the bound") {
        const auto vc = empirical_variance(TargetFunction::runge(), NoiseModel::gaussian(1e-2),
                                           256, 12, 0.3, 5000, 9);
        REQUIRE(vc.empirical / vc.exact == Approx(1.0).margin(0.15));
        REQUIRE(vc.exact <= variance_bound(12, 256, 1e-4));
        REQUIRE(vc.empirical <= variance_bound(12, 256, 1e-4));
    }
    SECTION("trials floor enforced") {
        REQUIRE_THROWS_AS(empirical_variance(TargetFunction::runge(), NoiseModel::none(), 64, 8,
                                             0.3, 99, 1),
                          std::invalid_argument);
    }
}

TEST_CASE("exact variance stays below the bound across degrees and points") {
    CounterRng rng(515);
    for (int rep = 0; rep < 25; ++rep) {
        const int n_intervals = 32 << (rng.next_u64() % 4);
        const int degree = 1 + static_cast<int>(rng.next_u64() % (n_intervals / 2));
        const double x = 2.0 * rng.next_unit() - 1.0;
        const auto s = sampling_vector(x, degree, n_intervals);
        double norm_sq = 0.0;
        for (double si : s) norm_sq += si * si;
        REQUIRE(norm_sq <= 4.0 * (degree + 1.0) / n_intervals);
    }
}

TEST_CASE("empirical_bias") {
    SECTION("unbiased for a polynomial target") {
        const auto f = TargetFunction::custom(
            "poly", [](double x) { return x * x - 0.5 * x + 1.0; });
        const auto bc = empirical_bias(f, NoiseModel::gaussian(0.05), 128, 6, 0.3, 2000, 12);
        REQUIRE(std::abs(bc.empirical) <= 3.0 * bc.std_error);
        REQUIRE(std::abs(bc.deterministic) < 1e-12);
    }
    SECTION("runge bias matches the proxy identity and its bound") {
        const auto bc = empirical_bias(TargetFunction::runge(), NoiseModel::gaussian(1e-3), 256,
                                       20, 0.3, 4000, 13);
        REQUIRE(std::abs(bc.empirical - bc.deterministic) <= 3.0 * bc.std_error);
        REQUIRE(std::abs(bc.deterministic) <= bc.proxy_bound);
        REQUIRE(std::abs(bc.empirical) <= bc.proxy_bound + 3.0 * bc.std_error);
    }
}

TEST_CASE("pointwise_bound_subgaussian") {
    SECTION("t=0 leaves only the residual term") {
        BoundInputs in{20, 1024, 0.1, 0.0, 0.0, 0.5, 0.0};
        const auto b = pointwise_bound_subgaussian(in);
        REQUIRE(b.threshold == Approx((std::sqrt(8.0 * 21.0) + 1.0) * 0.5).epsilon(1e-15));
        REQUIRE(b.probability == 2.0);
    }
    SECTION("arithmetic golden: n=49, N=8192, sigma=1e-3, t=3") {
        BoundInputs in{49, 8192, 1e-3, 0.0, 0.0, 0.0, 3.0};
        const auto b = pointwise_bound_subgaussian(in);
        REQUIRE(b.threshold == Approx(4.6875e-4).epsilon(1e-12));
        REQUIRE(b.probability == Approx(2.0 * std::exp(-4.5)).epsilon(1e-12));
        REQUIRE(b.probability == Approx(0.0222).margin(5e-5));
    }
}

TEST_CASE("pointwise_bound_subexponential") {
    SECTION("t=0 gives probability 2") {
        BoundInputs in{10, 512, 0.0, 0.1, 0.05, 0.0, 0.0};
        REQUIRE(pointwise_bound_subexponential(in, 0.3).probability == 2.0);
    }
    SECTION("laplace golden: b=1e-3, n=20, N=1024, t=2") {
        const auto p = NoiseModel::laplace(1e-3).subexponential_params();
        BoundInputs in{20, 1024, 0.0, p.nu, p.alpha, 0.0, 2.0};
        const auto b = pointwise_bound_subexponential(in, 0.3);
        // threshold = 2 t (nu^2/alpha) sqrt(21/1024) = 8e-3 sqrt(21)/32
        REQUIRE(b.threshold == Approx(8e-3 * std::sqrt(21.0) / 32.0).epsilon(1e-12));
        // kappa = nu^2/(2 alpha^2) = 1 for laplace
        const double expect_prob =
            2.0 * (2.0 <= b.t_star ? std::exp(-4.0) : std::exp(-2.0));
        REQUIRE(b.probability == Approx(expect_prob).epsilon(1e-12));
        REQUIRE(b.t_star > 0.0);
    }
    SECTION("underlying tail bound is continuous at its crossover") {
        const double nu = 0.35, alpha = 0.12;
        const double crossover = nu * nu / alpha;
        const double below = subexponential_tail_prob(crossover * (1 - 1e-12), nu, alpha);
        const double above = subexponential_tail_prob(crossover * (1 + 1e-12), nu, alpha);
        REQUIRE(below == Approx(above).epsilon(1e-9));
        REQUIRE(subexponential_tail_prob(0.0, nu, alpha) == 2.0);
    }
}

TEST_CASE("uniform_bound_subgaussian") {
    SECTION("n=0 with no residual reduces to 2 t sigma / sqrt(N)") {
        BoundInputs in{0, 1024, 0.2, 0.0, 0.0, 0.0, 1.5};
        const auto b = uniform_bound_subgaussian(in);
        REQUIRE(b.threshold == Approx(2.0 * 1.5 * 0.2 / 32.0).epsilon(1e-14));
        REQUIRE(b.probability == Approx(2.0 * std::exp(-1.125)).epsilon(1e-14));
    }
    SECTION("dominates the pointwise threshold at equal t") {
        BoundInputs in{30, 4096, 1e-2, 0.0, 0.0, 1e-3, 2.0};
        REQUIRE(uniform_bound_subgaussian(in).threshold >=
                pointwise_bound_subgaussian(in).threshold);
    }
    SECTION("the sqrt(N)-reduced residual flag only shrinks the threshold") {
        BoundInputs in{30, 4096, 1e-2, 0.0, 0.0, 1e-3, 2.0};
        REQUIRE(uniform_bound_subgaussian(in, true).threshold <
                uniform_bound_subgaussian(in, false).threshold);
    }
}

TEST_CASE("uniform_bound_subexponential") {
    const auto p = NoiseModel::laplace(1e-3).subexponential_params();
    SECTION("t=0 gives probability 2(n+1)") {
        BoundInputs in{20, 1024, 0.0, p.nu, p.alpha, 0.0, 0.0};
        REQUIRE(uniform_bound_subexponential(in, 0.3).probability == 2.0 * 21.0);
    }
    SECTION("mirrors the subgaussian structure with nu^2/alpha") {
        BoundInputs in{20, 1024, 0.0, p.nu, p.alpha, 2e-4, 2.0};
        const auto b = uniform_bound_subexponential(in, 0.3);
        BoundInputs sg{20, 1024, p.nu * p.nu / p.alpha, 0.0, 0.0, 2e-4, 2.0};
        REQUIRE(b.threshold == Approx(uniform_bound_subgaussian(sg).threshold).epsilon(1e-14));
        const double kappa = 1.0;  // nu^2 / (2 alpha^2) for laplace
        const double expect =
            2.0 * 21.0 * (2.0 <= b.t_star ? std::exp(-kappa * 4.0) : std::exp(-kappa * 2.0));
        REQUIRE(b.probability == Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("empirical coverage of the pointwise bound (smoke)") {
    const auto f = TargetFunction::runge();
    const auto proxy = residual_proxy(f, 24);
    BoundInputs in{24, 2048, 1e-3, 0.0, 0.0, proxy.value, 3.0};
    const auto b = pointwise_bound_subgaussian(in);
    int exceed = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto y = sample(f, NoiseModel::gaussian(1e-3), 2048, substream_seed(6021, t));
        const double v = evaluate(truncate(values_to_coeffs(y), 24), 0.3);
        if (std::abs(v - f(0.3)) > b.threshold) ++exceed;
    }
    REQUIRE(static_cast<double>(exceed) / trials <= 0.05);
}
