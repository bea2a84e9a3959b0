#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/errors.hpp"
#include "seedbank/renewal.hpp"
#include "seedbank/rng.hpp"

using namespace seedbank;

namespace {

// independent oracle: q_n by enumerating every renewal path reaching n
double q_by_path_enumeration(const AgeDistribution& dist, std::uint64_t n) {
    if (n == 0) return 1.0;
    const std::uint64_t width = dist.support_max();
    REQUIRE(width > 0);
    std::function<double(std::uint64_t)> walk = [&](std::uint64_t to_go) -> double {
        if (to_go == 0) return 1.0;
        double acc = 0.0;
        for (std::uint64_t step = 1; step <= std::min(width, to_go); ++step)
            acc += dist.pmf(step) * walk(to_go - step);
        return acc;
    };
    return walk(n);
}

// Gamma(x) by adaptive Simpson over the integral definition; test-side oracle
// for the asymptote constants.
double gamma_by_quadrature(double x) {
    const auto f = [x](double t) { return std::pow(t, x - 1.0) * std::exp(-t); };
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fb, double fm, double whole,
            int depth) -> double {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-13 * (1.0 + std::abs(whole)))
            return left + right + (left + right - whole) / 15.0;
        return simpson(a, m, fa, fm, flm, left, depth - 1) +
               simpson(m, b, fm, fb, frm, right, depth - 1);
    };
    const double a = 1e-9, b = 60.0;
    const double m = 0.5 * (a + b);
    const double whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    return simpson(a, b, f(a), f(b), f(m), whole, 40);
}

} // namespace

TEST_CASE("gamma evaluator meets the accuracy contract") {
    CHECK(std::tgamma(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::tgamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    for (const double x : {0.3, 0.7, 1.3, 1.7, 2.4}) {
        CHECK(std::tgamma(x + 1.0) == doctest::Approx(x * std::tgamma(x)).epsilon(1e-12));
        CHECK(std::tgamma(x) == doctest::Approx(gamma_by_quadrature(x)).epsilon(1e-9));
    }
}

TEST_CASE("renewal recursion matches path enumeration") {
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto seq = compute_renewal_sequence(half, 10);
    CHECK(seq.q[0] == 1.0);
    for (std::uint64_t n = 1; n <= 10; ++n)
        CHECK(seq.q[n] == doctest::Approx(q_by_path_enumeration(half, n)).epsilon(1e-12));
    // frozen from the enumeration
    CHECK(seq.q[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(seq.q[2] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(seq.q[3] == doctest::Approx(0.625).epsilon(1e-15));

    const auto mixed = AgeDistribution::explicit_table({0.3, 0.3, 0.4});
    const auto seq2 = compute_renewal_sequence(mixed, 12);
    for (std::uint64_t n = 1; n <= 12; ++n)
        CHECK(seq2.q[n] == doctest::Approx(q_by_path_enumeration(mixed, n)).epsilon(1e-12));
}

TEST_CASE("dirac(1) renews every generation") {
    const auto seq = compute_renewal_sequence(AgeDistribution::dirac(1), 200);
    for (std::uint64_t n = 0; n <= 200; ++n) CHECK(seq.q[n] == doctest::Approx(1.0));
    // dirac(3): renewals exactly at multiples of 3
    const auto seq3 = compute_renewal_sequence(AgeDistribution::dirac(3), 10);
    for (std::uint64_t n = 1; n <= 10; ++n)
        CHECK(seq3.q[n] == doctest::Approx(n % 3 == 0 ? 1.0 : 0.0));
}

TEST_CASE("renewal equation residual stays at solver precision") {
    for (const auto& dist : {AgeDistribution::power_law(0.3),
                             AgeDistribution::explicit_table({0.2, 0.5, 0.3})}) {
        const auto seq = compute_renewal_sequence(dist, 5000);
        CHECK(renewal_equation_residual(dist, seq) <= 1e-12);
    }
}

TEST_CASE("fft path equals the direct recursion") {
    for (const double alpha : {0.3, 0.7, 1.5}) {
        const auto dist = AgeDistribution::power_law(alpha);
        const auto direct = compute_renewal_sequence(dist, 100'000, RenewalMethod::direct);
        const auto fft = compute_renewal_sequence(dist, 100'000, RenewalMethod::fft);
        double worst = 0.0;
        for (std::size_t n = 0; n < direct.q.size(); ++n)
            worst = std::max(worst, std::abs(direct.q[n] - fft.q[n]));
        CHECK(worst <= 1e-12);
    }
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto direct = compute_renewal_sequence(half, 4096, RenewalMethod::direct);
    const auto fft = compute_renewal_sequence(half, 4096, RenewalMethod::fft);
    for (std::size_t n = 0; n < direct.q.size(); ++n)
        CHECK(std::abs(direct.q[n] - fft.q[n]) <= 1e-13);
}

TEST_CASE("renewal theorem: q approaches 1/mean") {
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto seq = compute_renewal_sequence(half, 150);
    CHECK(std::abs(seq.q[60] - 2.0 / 3.0) <= 1e-4);
    CHECK(std::abs(seq.q[150] - 2.0 / 3.0) <= 1e-12);

    // power-law convergence is ~n^(-1/2); the 1e-4 band needs a deep horizon
    const auto d15 = AgeDistribution::power_law(1.5);
    const auto deep = compute_renewal_sequence(d15, 10'000'000);
    CHECK(std::abs(deep.q[10'000'000] - 1.0 / d15.mean()) <= 1e-4);
}

TEST_CASE("truncated-law renewal sequences converge entrywise") {
    const auto d15 = AgeDistribution::power_law(1.5);
    const auto full = compute_renewal_sequence(d15, 1000);
    double prev_worst = 1.0;
    for (const std::uint64_t j : {100ull, 10'000ull}) {
        const auto seq = compute_renewal_sequence(d15.truncated(j), 1000);
        double worst = 0.0;
        for (std::size_t n = 0; n <= 1000; ++n)
            worst = std::max(worst, std::abs(seq.q[n] - full.q[n]));
        CHECK(worst <= 1e-3);
        CHECK(worst <= prev_worst);
        prev_worst = worst;
    }
}

TEST_CASE("monte-carlo renewal probability agrees with the recursion") {
    RngStream rng(21, 0);
    const auto dirac = mc_renewal_probability(AgeDistribution::dirac(1), 17, 1000, rng);
    CHECK(dirac.estimate == 1.0);
    CHECK(dirac.std_error == 0.0);

    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto est = mc_renewal_probability(half, 2, 1'000'000, rng);
    CHECK(std::abs(est.estimate - 0.75) <= 3.0 * est.std_error);

    const auto pl = AgeDistribution::power_law(0.3);
    const auto seq = compute_renewal_sequence(pl, 10);
    const auto est_pl = mc_renewal_probability(pl, 10, 1'000'000, rng);
    CHECK(std::abs(est_pl.estimate - seq.q[10]) <= 3.0 * est_pl.std_error);
}

TEST_CASE("profile estimates are thread-count invariant") {
    const auto half = AgeDistribution::explicit_table({0.5, 0.5});
    const auto one = mc_renewal_profile(half, 20, 20000, 99, 1);
    const auto four = mc_renewal_profile(half, 20, 20000, 99, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t n = 0; n < one.size(); ++n) CHECK(one[n].estimate == four[n].estimate);
    CHECK(one[0].estimate == 1.0);
}

TEST_CASE("q-square sums and their diagnostics") {
    const auto dirac_seq = compute_renewal_sequence(AgeDistribution::dirac(1), 100);
    const TailSum s = sum_q_squared(dirac_seq);
    CHECK(s.value == doctest::Approx(101.0));
    CHECK(!s.converged()); // divergent growth must be flagged

    const auto cross0 = cross_sum(dirac_seq, 0);
    CHECK(cross0.value == s.value);

    const auto pl_seq = compute_renewal_sequence(AgeDistribution::power_law(0.3), 1'000'000);
    const TailSum conv = sum_q_squared(pl_seq);
    CHECK(conv.converged(1e-4));
    CHECK(conv.value > 1.0);
    CHECK(conv.value < 2.0);

    // divergent-regime sums keep a visibly non-vanishing diagnostic
    const auto pl07 = compute_renewal_sequence(AgeDistribution::power_law(0.7), 100'000);
    CHECK(!sum_q_squared(pl07).converged(1e-3));
}

TEST_CASE("partial sums accumulate q") {
    const auto seq = compute_renewal_sequence(AgeDistribution::explicit_table({0.5, 0.5}), 10);
    CHECK(partial_sum(seq, 0) == doctest::Approx(1.0));
    CHECK(partial_sum(seq, 3) == doctest::Approx(1.0 + 0.5 + 0.75 + 0.625).epsilon(1e-14));
    CHECK_THROWS_AS(partial_sum(seq, 11), invalid_parameter_error);
}

TEST_CASE("tauberian asymptote constants and scaling") {
    // alpha = 0.3, i = 1: (1-a)/(Gamma(1.7)Gamma(1.3)), via the quadrature oracle
    const double c_oracle = 0.7 / (gamma_by_quadrature(1.7) * gamma_by_quadrature(1.3));
    CHECK(tauberian_partial_sum_asymptote(0.3, 1) == doctest::Approx(c_oracle).epsilon(1e-8));
    CHECK(tauberian_partial_sum_asymptote(0.3, 1) ==
          doctest::Approx(0.858393691334139).epsilon(1e-12));

    const double cross_oracle =
        0.49 / (gamma_by_quadrature(1.7) * gamma_by_quadrature(1.7) * gamma_by_quadrature(0.6));
    CHECK(tauberian_cross_sum_asymptote(0.3, 1) == doctest::Approx(cross_oracle).epsilon(1e-8));
    CHECK(tauberian_cross_sum_asymptote(0.3, 1) ==
          doctest::Approx(0.398531653960405).epsilon(1e-12));

    for (const std::uint64_t i : {1ull, 10ull, 1000ull}) {
        CHECK(tauberian_partial_sum_asymptote(0.3, 2 * i) /
                  tauberian_partial_sum_asymptote(0.3, i) ==
              doctest::Approx(std::pow(2.0, 0.3)).epsilon(1e-12));
        CHECK(tauberian_cross_sum_asymptote(0.3, 2 * i) / tauberian_cross_sum_asymptote(0.3, i) ==
              doctest::Approx(std::pow(2.0, -0.4)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(tauberian_partial_sum_asymptote(1.2, 1), invalid_parameter_error);
    CHECK_THROWS_AS(tauberian_cross_sum_asymptote(0.5, 1), invalid_parameter_error);

    CHECK(tauberian_cross_sum_asymptote_adjusted(0.3, 1) ==
          doctest::Approx(tauberian_cross_sum_asymptote(0.3, 1) /
                          (2.0 * std::cos(0.3 * M_PI)))
              .epsilon(1e-12));
}

TEST_CASE("partial sums track the asymptote") {
    const auto seq = compute_renewal_sequence(AgeDistribution::power_law(0.3), 10'000);
    const double ratio = partial_sum(seq, 10'000) / tauberian_partial_sum_asymptote(0.3, 10'000);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
}

TEST_CASE("cross sums track the adjusted asymptote") {
    // the unadjusted constant overshoots by 2cos(pi a); see the adjusted variant
    const auto seq = compute_renewal_sequence(AgeDistribution::power_law(0.3), 1'000'000);
    const double cross = cross_sum(seq, 1000).value;
    const double adjusted = tauberian_cross_sum_asymptote_adjusted(0.3, 1000);
    CHECK(cross / adjusted > 0.9);
    CHECK(cross / adjusted < 1.1);
    const double unadjusted = tauberian_cross_sum_asymptote(0.3, 1000);
    CHECK(cross / unadjusted < 0.9); // documented paper-constant mismatch
}

TEST_CASE("horizon guard") {
    CHECK_THROWS_AS(compute_renewal_sequence(AgeDistribution::power_law(0.3), 300'000'000),
                    resource_error);
}
