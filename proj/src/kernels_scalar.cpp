#include "seedbank/kernels.hpp"

namespace seedbank::kernels::detail {

// Reference kernels. Fixed four-lane accumulator structure so the summation
// order matches the vector variants lane for lane where possible; scalar is
// still the semantic baseline the SIMD variants are tested against.
double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

double conv_point_scalar(const double* pmf, const double* q_at_n, std::size_t m) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 1;
    for (; k + 4 <= m + 1; k += 4) {
        s0 += pmf[k] * q_at_n[-static_cast<std::ptrdiff_t>(k)];
        s1 += pmf[k + 1] * q_at_n[-static_cast<std::ptrdiff_t>(k + 1)];
        s2 += pmf[k + 2] * q_at_n[-static_cast<std::ptrdiff_t>(k + 2)];
        s3 += pmf[k + 3] * q_at_n[-static_cast<std::ptrdiff_t>(k + 3)];
    }
    double tail = 0.0;
    for (; k <= m; ++k) tail += pmf[k] * q_at_n[-static_cast<std::ptrdiff_t>(k)];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

void complex_mul_scale_scalar(double* dst, const double* src, std::size_t n, double scale) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = dst[2 * i] * src[2 * i] - dst[2 * i + 1] * src[2 * i + 1];
        const double im = dst[2 * i] * src[2 * i + 1] + dst[2 * i + 1] * src[2 * i];
        dst[2 * i] = re * scale;
        dst[2 * i + 1] = im * scale;
    }
}

} // namespace seedbank::kernels::detail
