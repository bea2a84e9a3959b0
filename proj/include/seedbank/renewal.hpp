#pragma once

#include <cstdint>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/rng.hpp"

namespace seedbank {

// q_n = probability that a lineage has an ancestor exactly n generations back.
// q_0 = 1 and q satisfies the renewal equation q_n = sum_k pmf(k) q_{n-k}.
struct RenewalSequence {
    std::vector<double> q;
    std::uint64_t horizon() const noexcept { return q.size() - 1; }
};

enum class RenewalMethod {
    automatic, // direct for finite support or small horizons, fft otherwise
    direct,    // O(H * min(H, support width)) convolution recursion
    fft        // divide-and-conquer online convolution over FFTW transforms
};

RenewalSequence compute_renewal_sequence(const AgeDistribution& dist, std::uint64_t horizon,
                                         RenewalMethod method = RenewalMethod::automatic);

// Max residual of the renewal equation over 1..H (direct re-evaluation; O(H^2)
// for unbounded support, so meant for moderate horizons).
double renewal_equation_residual(const AgeDistribution& dist, const RenewalSequence& seq);

// Partial sum with a convergence diagnostic. The q-sum dichotomy is asymptotic,
// so sums never guess convergence: `tail_increment` is the amount accumulated
// over the trailing tenth of the horizon (n in (0.9H, H]) and callers decide.
struct TailSum {
    double value = 0.0;
    double tail_increment = 0.0;
    double tail_fraction() const noexcept { return value > 0.0 ? tail_increment / value : 0.0; }
    bool converged(double rel_tol = 1e-4) const noexcept { return tail_fraction() < rel_tol; }
};

// sum_{n=0}^{H} q_n^2 (includes q_0 = 1).
TailSum sum_q_squared(const RenewalSequence& seq);
// sum_{n=0}^{H-lag} q_n q_{n+lag}; cross_sum(seq, 0) == sum_q_squared(seq).
TailSum cross_sum(const RenewalSequence& seq, std::uint64_t lag);
// sum_{n=0}^{i} q_n.
double partial_sum(const RenewalSequence& seq, std::uint64_t i);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t reps = 0;
};

// Unbiased Monte-Carlo estimate of q_n: walk the renewal sums until they pass n
// and score a hit when some partial sum equals n exactly.
McEstimate mc_renewal_probability(const AgeDistribution& dist, std::uint64_t n,
                                  std::uint64_t reps, RngStream& rng);

// Batched variant: one walk per replicate scores every n <= n_max. Replicate
// streams are derived from (master_seed, replicate), so the result does not
// depend on the thread count.
std::vector<McEstimate> mc_renewal_profile(const AgeDistribution& dist, std::uint64_t n_max,
                                           std::uint64_t reps, std::uint64_t master_seed,
                                           unsigned threads);

// Asymptotic evaluators for power-law tails (slowly varying factor = 1).
// partial:  sum_{n<=i} q_n ~ (1-a) / (Gamma(2-a) Gamma(1+a)) * i^a,    a in (0,1)
// cross:    sum_n q_n q_{n-i} ~ (1-a)^2 / (Gamma(2-a)^2 Gamma(2a)) * i^(2a-1), a in (0,1/2)
double tauberian_partial_sum_asymptote(double alpha, std::uint64_t i);
double tauberian_cross_sum_asymptote(double alpha, std::uint64_t i);
// The cross-sum constant above overshoots the local renewal limit by a factor
// 2cos(pi a): squaring q_n ~ sin(pi a)/pi * n^(a-1) and integrating gives the
// adjusted constant below, which is what the computed cross-sums converge to.
double tauberian_cross_sum_asymptote_adjusted(double alpha, std::uint64_t i);

} // namespace seedbank
