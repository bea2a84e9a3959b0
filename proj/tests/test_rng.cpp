#include <doctest.h>

#include <cmath>
#include <vector>

#include "seedbank/rng.hpp"

using namespace seedbank;

TEST_CASE("identical seed and stream reproduce the sequence") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams from one master seed differ") {
    RngStream a(42, 0), b(42, 1), c(43, 0);
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto xa = a.next_u64();
        equal_ab += (xa == b.next_u64());
        equal_ac += (xa == c.next_u64());
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("unit doubles stay in their half-open ranges") {
    RngStream rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.next_unit_open();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("next_below respects the bound and is roughly uniform") {
    RngStream rng(9, 0);
    const std::uint64_t bound = 13;
    std::vector<std::uint64_t> counts(bound, 0);
    const int reps = 130000;
    for (int i = 0; i < reps; ++i) {
        const auto x = rng.next_below(bound);
        REQUIRE(x < bound);
        counts[x] += 1;
    }
    const double expected = static_cast<double>(reps) / static_cast<double>(bound);
    for (const auto c : counts)
        CHECK(std::abs(static_cast<double>(c) - expected) < 5.0 * std::sqrt(expected));
}

TEST_CASE("sample mean of next_unit is near 1/2") {
    RngStream rng(1234, 5);
    double acc = 0.0;
    const int reps = 1000000;
    for (int i = 0; i < reps; ++i) acc += rng.next_unit();
    // stderr = 1/sqrt(12 reps) ~ 2.9e-4
    CHECK(std::abs(acc / reps - 0.5) < 4.0 * 2.9e-4);
}
