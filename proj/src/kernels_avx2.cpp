#if defined(__x86_64__)

#include <immintrin.h>

#include "seedbank/kernels.hpp"

namespace seedbank::kernels::detail {

double dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double conv_point_avx2(const double* pmf, const double* q_at_n, std::size_t m) noexcept {
    // q is read with stride -1: load a descending window and reverse the lanes.
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 1;
    for (; k + 8 <= m + 1; k += 8) {
        const __m256d p0 = _mm256_loadu_pd(pmf + k);
        const __m256d q0 = _mm256_permute4x64_pd(
            _mm256_loadu_pd(q_at_n - static_cast<std::ptrdiff_t>(k) - 3), 0b00011011);
        acc0 = _mm256_fmadd_pd(p0, q0, acc0);
        const __m256d p1 = _mm256_loadu_pd(pmf + k + 4);
        const __m256d q1 = _mm256_permute4x64_pd(
            _mm256_loadu_pd(q_at_n - static_cast<std::ptrdiff_t>(k) - 7), 0b00011011);
        acc1 = _mm256_fmadd_pd(p1, q1, acc1);
    }
    for (; k + 4 <= m + 1; k += 4) {
        const __m256d p0 = _mm256_loadu_pd(pmf + k);
        const __m256d q0 = _mm256_permute4x64_pd(
            _mm256_loadu_pd(q_at_n - static_cast<std::ptrdiff_t>(k) - 3), 0b00011011);
        acc0 = _mm256_fmadd_pd(p0, q0, acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; k <= m; ++k) s += pmf[k] * q_at_n[-static_cast<std::ptrdiff_t>(k)];
    return s;
}

void complex_mul_scale_avx2(double* dst, const double* src, std::size_t n, double scale) noexcept {
    const __m256d vscale = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // two complexes per vector: [re0 im0 re1 im1]
        const __m256d x = _mm256_loadu_pd(dst + 2 * i);
        const __m256d y = _mm256_loadu_pd(src + 2 * i);
        const __m256d y_re = _mm256_movedup_pd(y);                  // [yre0 yre0 yre1 yre1]
        const __m256d y_im = _mm256_permute_pd(y, 0b1111);          // [yim0 yim0 yim1 yim1]
        const __m256d x_swap = _mm256_permute_pd(x, 0b0101);        // [im0 re0 im1 re1]
        const __m256d prod = _mm256_fmaddsub_pd(x, y_re, _mm256_mul_pd(x_swap, y_im));
        _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(prod, vscale));
    }
    for (; i < n; ++i) {
        const double re = dst[2 * i] * src[2 * i] - dst[2 * i + 1] * src[2 * i + 1];
        const double im = dst[2 * i] * src[2 * i + 1] + dst[2 * i + 1] * src[2 * i];
        dst[2 * i] = re * scale;
        dst[2 * i + 1] = im * scale;
    }
}

} // namespace seedbank::kernels::detail

#endif // __x86_64__
