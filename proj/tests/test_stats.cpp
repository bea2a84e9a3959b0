#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "seedbank/errors.hpp"
#include "seedbank/rng.hpp"
#include "seedbank/stats.hpp"

using namespace seedbank;

TEST_CASE("summarize computes mean and standard error") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    // sd = sqrt(5/3), se = sd/2
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
    CHECK(s.count == 4);
}

TEST_CASE("ks statistic on inverse-cdf grid samples is tiny") {
    const std::size_t n = 1000;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        xs[i] = -std::log(1.0 - u); // Exp(1) inverse cdf
    }
    const auto r = ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(r.statistic <= 1.0 / static_cast<double>(n));
    CHECK(r.p_value > 0.99);
}

TEST_CASE("ks self-test against a known generator") {
    int passes = 0;
    for (int run = 0; run < 100; ++run) {
        RngStream rng(500 + run, 0);
        std::vector<double> xs(10'000);
        for (double& x : xs) x = -std::log(1.0 - rng.next_unit());
        std::sort(xs.begin(), xs.end());
        const auto r = ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x); });
        passes += (r.p_value > 0.01);
    }
    CHECK(passes >= 95);
}

TEST_CASE("ks on constant samples saturates at the cdf gap") {
    std::vector<double> xs(100, 0.7);
    const auto r = ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(r.statistic == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("ks input validation") {
    std::vector<double> unsorted = {3.0, 1.0, 2.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
    CHECK_THROWS_AS(ks_statistic(unsorted, [](double) { return 0.5; }),
                    invalid_parameter_error);
    std::vector<double> tiny = {1.0, 2.0};
    CHECK_THROWS_AS(ks_statistic(tiny, [](double) { return 0.5; }), invalid_parameter_error);
}

TEST_CASE("chi-square: proportional observations give zero") {
    const std::vector<std::uint64_t> obs = {250, 500, 250};
    const std::vector<double> probs = {0.25, 0.5, 0.25};
    const auto r = chi_square_gof(obs, probs);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.dof == 2);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("chi-square self-test on binomial counts") {
    int passes = 0;
    for (int run = 0; run < 100; ++run) {
        RngStream rng(900 + run, 0);
        std::vector<std::uint64_t> obs(3, 0);
        for (int i = 0; i < 100'000; ++i) {
            const int k = (rng.next_unit() < 0.5) + (rng.next_unit() < 0.5);
            obs[k] += 1;
        }
        const std::vector<double> probs = {0.25, 0.5, 0.25};
        passes += (chi_square_gof(obs, probs).p_value > 0.01);
    }
    CHECK(passes >= 95);
}

TEST_CASE("chi-square pools sparse tails and rejects degenerate input") {
    // trailing cells pooled into one; two survive
    const std::vector<std::uint64_t> obs = {60, 30, 3, 2, 1};
    const std::vector<double> probs = {0.6, 0.3, 0.04, 0.03, 0.03};
    const auto r = chi_square_gof(obs, probs);
    CHECK(r.dof == 2);

    const std::vector<std::uint64_t> all_zero = {0, 0};
    CHECK_THROWS_AS(chi_square_gof(all_zero, probs), invalid_parameter_error);

    // everything pools into one cell -> dof 0 -> error
    const std::vector<std::uint64_t> few = {3, 2};
    const std::vector<double> half = {0.5, 0.5};
    CHECK_THROWS_AS(chi_square_gof(few, half), invalid_parameter_error);
}

TEST_CASE("wilson interval endpoints") {
    const auto zero = wilson_interval(0, 50, 1.96);
    CHECK(zero.lo == doctest::Approx(0.0));
    const auto full = wilson_interval(50, 50, 1.96);
    CHECK(full.hi == doctest::Approx(1.0));
    const auto mid = wilson_interval(50, 100, 1.96);
    CHECK(mid.lo < 0.5);
    CHECK(mid.hi > 0.5);
    CHECK(mid.hi - mid.lo == doctest::Approx(0.19).epsilon(0.03));
    CHECK_THROWS_AS(wilson_interval(5, 4, 1.96), invalid_parameter_error);
}

TEST_CASE("kolmogorov survival function shape") {
    CHECK(kolmogorov_q(0.0) == doctest::Approx(1.0));
    CHECK(kolmogorov_q(5.0) < 1e-10);
    double prev = 1.0;
    for (double x = 0.2; x < 2.0; x += 0.1) {
        const double v = kolmogorov_q(x);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}
