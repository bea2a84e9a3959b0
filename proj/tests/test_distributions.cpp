#include <doctest.h>

#include <cmath>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/errors.hpp"
#include "seedbank/rng.hpp"

using namespace seedbank;

namespace {

// zeta oracle, independent of the library path: raw partial sum plus integral
// bracket, accurate to ~1e-11 at this depth.
double zeta_oracle(double alpha) {
    long double acc = 0.0L;
    const long long M = 10'000'000;
    for (long long n = M; n >= 1; --n) acc += std::pow(static_cast<long double>(n), -alpha);
    acc += std::pow(static_cast<long double>(M), 1.0L - alpha) / (alpha - 1.0L);
    acc -= 0.5L * std::pow(static_cast<long double>(M), -alpha);
    return static_cast<double>(acc);
}

} // namespace

TEST_CASE("power-law pmf and tail follow the tail-difference construction") {
    const auto d15 = AgeDistribution::power_law(1.5);
    CHECK(d15.pmf(1) == doctest::Approx(1.0 - std::pow(2.0, -1.5)).epsilon(1e-15));
    CHECK(d15.pmf(1) == doctest::Approx(0.646446609406726).epsilon(1e-12));
    for (const double alpha : {0.3, 0.7, 1.5, 3.0}) {
        const auto d = AgeDistribution::power_law(alpha);
        CHECK(d.tail(1) == 1.0);
    }
    const auto d03 = AgeDistribution::power_law(0.3);
    CHECK(d03.tail(4) == doctest::Approx(std::pow(4.0, -0.3)).epsilon(1e-15));
    CHECK(d03.tail(4) == doctest::Approx(0.659753955386447).epsilon(1e-12));
    CHECK_THROWS_AS(AgeDistribution::power_law(0.0), invalid_parameter_error);
    CHECK_THROWS_AS(AgeDistribution::power_law(-1.0), invalid_parameter_error);
}

TEST_CASE("dirac distributions") {
    const auto d1 = AgeDistribution::dirac(1);
    CHECK(d1.mean() == 1.0);
    CHECK(d1.min_age_one());
    RngStream rng(3, 0);
    for (int i = 0; i < 100; ++i) CHECK(d1.sample(rng) == 1);

    const auto d3 = AgeDistribution::dirac(3);
    CHECK(d3.tail(2) == 1.0);
    CHECK(d3.tail(4) == 0.0);
    CHECK(!d3.min_age_one()); // violates the standing assumption, flagged
    CHECK_THROWS_AS(AgeDistribution::dirac(0), invalid_parameter_error);
}

TEST_CASE("explicit tables validate their mass") {
    CHECK_THROWS_AS(AgeDistribution::explicit_table({0.5, 0.6}), invalid_parameter_error);
    CHECK_THROWS_AS(AgeDistribution::explicit_table({-0.1, 1.1}), invalid_parameter_error);
    CHECK_THROWS_AS(AgeDistribution::explicit_table({}), invalid_parameter_error);
    const auto d = AgeDistribution::explicit_table({0.5, 0.5});
    CHECK(d.mean() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(d.tail(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.support_max() == 2);
}

TEST_CASE("truncation renormalizes on {1..j}") {
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto t1 = half.truncated(1);
    CHECK(t1.pmf(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t1.support_max() == 1);

    // oracle: tail differences then renormalize
    const auto pl = AgeDistribution::power_law(0.5);
    const auto t2 = pl.truncated(2);
    const double expected = (1.0 - std::pow(2.0, -0.5)) / (1.0 - std::pow(3.0, -0.5));
    CHECK(t2.pmf(1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(t2.pmf(1) == doctest::Approx(0.693000920903918).epsilon(1e-12));
    CHECK(t2.pmf(2) == doctest::Approx(1.0 - expected).epsilon(1e-12));

    // truncating at or past the support changes nothing
    const auto t3 = half.truncated(5);
    CHECK(t3.pmf(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t3.pmf(2) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(AgeDistribution::dirac(3).truncated(2), invalid_parameter_error);
}

TEST_CASE("mass consistency: leading pmf plus tail is one") {
    const std::vector<AgeDistribution> dists = {
        AgeDistribution::dirac(1), AgeDistribution::dirac(4),
        AgeDistribution::explicit_table({0.3, 0.3, 0.4}),
        AgeDistribution::power_law(0.3), AgeDistribution::power_law(1.5)};
    for (const auto& d : dists) {
        for (const std::uint64_t n_max : {1u, 2u, 10u, 1000u}) {
            long double acc = 0.0L;
            for (std::uint64_t n = 1; n <= n_max; ++n) acc += d.pmf(n);
            acc += d.tail(n_max + 1);
            CHECK(std::abs(static_cast<double>(acc) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("mean: exact tables and zeta for power laws") {
    CHECK(AgeDistribution::explicit_table({0.5, 0.5}).mean() == doctest::Approx(1.5));
    const auto d15 = AgeDistribution::power_law(1.5);
    CHECK(d15.mean() == doctest::Approx(zeta_oracle(1.5)).epsilon(1e-10));
    CHECK(d15.mean() == doctest::Approx(2.612375348685488).epsilon(1e-10));
    CHECK(!AgeDistribution::power_law(0.3).finite_mean());
    CHECK(!AgeDistribution::power_law(1.0).finite_mean());
    CHECK(std::isinf(AgeDistribution::power_law(0.3).mean()));
}

TEST_CASE("sampling matches the analytic mean") {
    RngStream rng(11, 0);
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const std::uint64_t reps = 1'000'000;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < reps; ++i) acc += static_cast<double>(half.sample(rng));
    const double mean = acc / static_cast<double>(reps);
    const double se = 0.5 / std::sqrt(static_cast<double>(reps)); // sd = 1/2
    CHECK(std::abs(mean - 1.5) < 3.0 * se);
}

TEST_CASE("power-law sampling mean approaches zeta(1.5)") {
    RngStream rng(12, 0);
    const auto d = AgeDistribution::power_law(1.5);
    const std::uint64_t reps = 1'000'000;
    long double acc = 0.0L, acc2 = 0.0L;
    for (std::uint64_t i = 0; i < reps; ++i) {
        const auto x = static_cast<double>(d.sample(rng));
        acc += x;
        acc2 += x * x;
    }
    const double mean = static_cast<double>(acc / reps);
    const double var = static_cast<double>(acc2 / reps) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(reps));
    CHECK(std::abs(mean - zeta_oracle(1.5)) < 3.0 * se);
}

TEST_CASE("power-law sampling hits the exact tail probabilities") {
    for (const double alpha : {0.7, 1.5}) {
        RngStream rng(13, static_cast<std::uint64_t>(alpha * 10));
        const auto d = AgeDistribution::power_law(alpha);
        const std::uint64_t reps = 1'000'000;
        const std::vector<std::uint64_t> thresholds = {1, 2, 5, 10, 100};
        std::vector<std::uint64_t> hits(thresholds.size(), 0);
        for (std::uint64_t i = 0; i < reps; ++i) {
            const std::uint64_t x = d.sample(rng);
            for (std::size_t t = 0; t < thresholds.size(); ++t)
                if (x >= thresholds[t]) hits[t] += 1;
        }
        for (std::size_t t = 0; t < thresholds.size(); ++t) {
            const double p = std::pow(static_cast<double>(thresholds[t]), -alpha);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
            const double observed = static_cast<double>(hits[t]) / static_cast<double>(reps);
            CHECK(std::abs(observed - p) <= 4.0 * se + 1e-9);
        }
    }
}

TEST_CASE("truncations converge to the full law") {
    const auto d = AgeDistribution::power_law(1.5);
    double prev_mean = 0.0;
    double prev_tv = 1.0;
    for (const std::uint64_t j : {100ull, 10'000ull}) {
        const auto t = d.truncated(j);
        // total variation against the full law on {1..j} plus the remainder
        long double tv = 0.0L;
        for (std::uint64_t i = 1; i <= j; ++i) tv += std::abs(t.pmf(i) - d.pmf(i));
        tv += d.tail(j + 1);
        tv *= 0.5L;
        CHECK(static_cast<double>(tv) < prev_tv);
        CHECK(static_cast<double>(tv) <= d.tail(j + 1)); // renormalization bound
        prev_tv = static_cast<double>(tv);

        CHECK(t.mean() > prev_mean); // monotone convergence from below
        CHECK(t.mean() < d.mean());
        prev_mean = t.mean();
    }
    CHECK(d.truncated(10'000).mean() == doctest::Approx(d.mean()).epsilon(2e-2));
}

TEST_CASE("json round trip and validation") {
    const std::vector<AgeDistribution> dists = {
        AgeDistribution::dirac(2), AgeDistribution::explicit_table({0.25, 0.75}),
        AgeDistribution::power_law(0.3)};
    for (const auto& d : dists) {
        const auto j = d.to_json();
        const auto back = AgeDistribution::from_json(j);
        CHECK(back.kind() == d.kind());
        CHECK(back.pmf(1) == doctest::Approx(d.pmf(1)).epsilon(1e-15));
        CHECK(back.tail(3) == doctest::Approx(d.tail(3)).epsilon(1e-15));
    }
    CHECK(AgeDistribution::from_json(nlohmann::json::parse(
                                         R"({"kind":"power_law","alpha":0.3})"))
              .alpha() == doctest::Approx(0.3));
    CHECK_THROWS_AS(AgeDistribution::from_json(nlohmann::json::parse(R"({"kind":"nope"})")),
                    invalid_parameter_error);
    CHECK_THROWS_AS(
        AgeDistribution::from_json(nlohmann::json::parse(R"({"kind":"dirac","m":1,"x":2})")),
        invalid_parameter_error);
}
