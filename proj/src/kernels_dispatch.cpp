#include <atomic>

#include "seedbank/kernels.hpp"

namespace seedbank::kernels {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
std::atomic<Isa> g_isa{cpu_has_avx2() ? Isa::avx2 : Isa::scalar};
}

Isa active_isa() noexcept { return g_isa.load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
    if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
    g_isa.store(isa, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) noexcept {
#if defined(__x86_64__)
    if (active_isa() == Isa::avx2) return detail::dot_avx2(a, b, n);
#endif
    return detail::dot_scalar(a, b, n);
}

double sum_squares(const double* a, std::size_t n) noexcept { return dot(a, a, n); }

double conv_point(const double* pmf, const double* q_at_n, std::size_t m) noexcept {
#if defined(__x86_64__)
    if (active_isa() == Isa::avx2) return detail::conv_point_avx2(pmf, q_at_n, m);
#endif
    return detail::conv_point_scalar(pmf, q_at_n, m);
}

void complex_mul_scale(double* dst, const double* src, std::size_t n, double scale) noexcept {
#if defined(__x86_64__)
    if (active_isa() == Isa::avx2) return detail::complex_mul_scale_avx2(dst, src, n, scale);
#endif
    detail::complex_mul_scale_scalar(dst, src, n, scale);
}

} // namespace seedbank::kernels
