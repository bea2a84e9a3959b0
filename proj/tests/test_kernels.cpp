#include <doctest.h>

#include <cmath>
#include <vector>

#include "seedbank/kernels.hpp"
#include "seedbank/rng.hpp"

using namespace seedbank;
namespace k = seedbank::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, RngStream& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_unit() * 2.0 - 1.0;
    return v;
}

// long-double reference accumulation
double dot_reference(const std::vector<double>& a, const std::vector<double>& b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(acc);
}

} // namespace

TEST_CASE("dot matches a long-double reference") {
    RngStream rng(7, 0);
    for (const std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1000u, 4097u}) {
        const auto a = random_vector(n, rng);
        const auto b = random_vector(n, rng);
        const double ref = dot_reference(a, b);
        CHECK(std::abs(k::dot(a.data(), b.data(), n) - ref) <=
              1e-12 * (1.0 + std::abs(ref)) + 1e-12 * static_cast<double>(n));
    }
}

TEST_CASE("conv_point computes sum pmf[k] q[n-k]") {
    RngStream rng(8, 0);
    const auto pmf = random_vector(300, rng);
    const auto q = random_vector(300, rng);
    for (const std::size_t n : {1u, 2u, 5u, 33u, 299u}) {
        const std::size_t m = n;
        long double ref = 0.0L;
        for (std::size_t kk = 1; kk <= m; ++kk)
            ref += static_cast<long double>(pmf[kk]) * q[n - kk];
        CHECK(std::abs(k::conv_point(pmf.data(), q.data() + n, m) -
                       static_cast<double>(ref)) <= 1e-12);
    }
}

TEST_CASE("scalar and vector variants agree") {
    if (!k::cpu_has_avx2()) return;
    RngStream rng(9, 0);
    for (const std::size_t n : {1u, 5u, 16u, 63u, 64u, 65u, 100000u}) {
        const auto a = random_vector(n, rng);
        const auto b = random_vector(n, rng);
        const double scalar = k::detail::dot_scalar(a.data(), b.data(), n);
        const double vector = k::detail::dot_avx2(a.data(), b.data(), n);
        CHECK(std::abs(scalar - vector) <= 1e-12 * (1.0 + std::abs(scalar)) +
                                               1e-13 * static_cast<double>(n));

        if (n >= 2) {
            const std::size_t at = n - 1;
            const double cs = k::detail::conv_point_scalar(a.data(), b.data() + at, at);
            const double cv = k::detail::conv_point_avx2(a.data(), b.data() + at, at);
            CHECK(std::abs(cs - cv) <= 1e-12 * (1.0 + std::abs(cs)) +
                                           1e-13 * static_cast<double>(n));
        }
    }
}

TEST_CASE("complex multiply variants agree with the direct formula") {
    RngStream rng(10, 0);
    const std::size_t n = 1537;
    const auto x = random_vector(2 * n, rng);
    const auto y = random_vector(2 * n, rng);
    const double scale = 0.125;

    auto expected = x;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = x[2 * i] * y[2 * i] - x[2 * i + 1] * y[2 * i + 1];
        const double im = x[2 * i] * y[2 * i + 1] + x[2 * i + 1] * y[2 * i];
        expected[2 * i] = re * scale;
        expected[2 * i + 1] = im * scale;
    }

    auto scalar = x;
    k::detail::complex_mul_scale_scalar(scalar.data(), y.data(), n, scale);
    for (std::size_t i = 0; i < 2 * n; ++i) CHECK(scalar[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    if (k::cpu_has_avx2()) {
        auto vec = x;
        k::detail::complex_mul_scale_avx2(vec.data(), y.data(), n, scale);
        for (std::size_t i = 0; i < 2 * n; ++i)
            CHECK(std::abs(vec[i] - expected[i]) <= 1e-12 * (1.0 + std::abs(expected[i])));
    }
}

TEST_CASE("forcing the scalar path changes the active isa") {
    const k::Isa before = k::active_isa();
    k::force_isa(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    k::force_isa(before);
}
