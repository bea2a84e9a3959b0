#pragma once

#include <cstddef>
#include <string>

namespace seedbank::kernels {

enum class Isa { scalar, avx2 };

// Active instruction set. Defaults to the best variant the CPU supports;
// can be forced (e.g. for equivalence tests or the --isa CLI flag).
Isa active_isa() noexcept;
void force_isa(Isa isa) noexcept;
bool cpu_has_avx2() noexcept;
std::string isa_name(Isa isa);

// sum_{i<n} a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n) noexcept;

// sum_{i<n} a[i]^2
double sum_squares(const double* a, std::size_t n) noexcept;

// Convolution tap used by the renewal recursion:
//   sum_{k=1..m} pmf[k] * q_at_n[-k]
// pmf is indexed from 1 (pmf[0] unused), q_at_n points one past the last
// computed q value (q_at_n[-1] = q_{n-1}).
double conv_point(const double* pmf, const double* q_at_n, std::size_t m) noexcept;

// Pointwise complex multiply-scale on interleaved (re,im) arrays of length n
// complexes: dst *= src * scale. Used by the FFT convolution path.
void complex_mul_scale(double* dst, const double* src, std::size_t n, double scale) noexcept;

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n) noexcept;
double conv_point_scalar(const double* pmf, const double* q_at_n, std::size_t m) noexcept;
void complex_mul_scale_scalar(double* dst, const double* src, std::size_t n, double scale) noexcept;
#if defined(__x86_64__)
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
double conv_point_avx2(const double* pmf, const double* q_at_n, std::size_t m) noexcept;
void complex_mul_scale_avx2(double* dst, const double* src, std::size_t n, double scale) noexcept;
#endif
} // namespace detail

} // namespace seedbank::kernels
