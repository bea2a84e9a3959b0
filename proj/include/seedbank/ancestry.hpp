#pragma once

#include <cstdint>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/renewal.hpp"
#include "seedbank/rng.hpp"
#include "seedbank/stats.hpp"

namespace seedbank {

// Outcome of one backward pair simulation: merged at generation `generation`
// (the time to the most recent common ancestor), or censored at the horizon.
struct PairOutcome {
    bool merged = false;
    std::uint64_t generation = 0; // tau if merged, horizon otherwise
};

// Two independent renewal walks started from distinct individuals of the same
// generation; at every joint renewal the ancestors collide with probability
// 1/N. Event-driven, so heavy-tailed gaps cost O(1). Generation 0 is excluded
// (the sampled individuals are distinct).
PairOutcome simulate_pair_tmrca(std::uint64_t population, const AgeDistribution& dist,
                                std::uint64_t horizon, RngStream& rng);

struct MergeEvent {
    std::uint64_t generation = 0;
    std::vector<std::uint32_t> blocks; // labels merged in this event (>= 2)
};

struct PartitionTrajectory {
    std::uint32_t initial_blocks = 0;
    std::uint64_t horizon = 0;
    std::vector<MergeEvent> events;
    std::uint32_t final_blocks() const noexcept;
    std::uint32_t block_count_at(std::uint64_t generation) const noexcept;
};

// n-sample ancestral partition: every lineage at a renewal draws a uniform
// label in {1..N}; lineages sharing (generation, label) merge into one block,
// whose renewal process continues as the lowest merged block label.
PartitionTrajectory simulate_ancestral_partition(std::uint64_t population, std::uint32_t samples,
                                                 const AgeDistribution& dist,
                                                 std::uint64_t horizon, RngStream& rng);

// Truncated evaluation of the pairwise meeting probability
//   ( sum_{n=0}^{H} q_n q_{n+d} ) / ( N + sum_{n=1}^{H} q_n^2 ),
// with the d = 0 numerator starting at n = 1: the sampled individuals are
// distinct, so there is no same-generation collision term.
double meeting_probability_truncated(std::uint64_t population, const RenewalSequence& seq,
                                     std::uint64_t lag);

// Regime-gated version: requires the q-square sum to pass its convergence
// diagnostic (power-law alpha < 1/2); otherwise the probability is 1 in the
// infinite-mean regimes and the truncated quotient is meaningless.
double exact_meeting_probability(std::uint64_t population, const AgeDistribution& dist,
                                 std::uint64_t lag, std::uint64_t horizon);

struct SurvivalPoint {
    double t = 0.0;          // coalescent time unit (generations / N)
    double survival = 0.0;   // fraction of replicates with tau > N t
    Interval wilson;         // 95% Wilson interval
    double reference = 0.0;  // exp(-beta^2 t)
};

// Estimates P(tau > N t) for a pair sample and compares against the
// exponential limit exp(-beta^2 t). Finite-mean distributions only.
std::vector<SurvivalPoint> pairwise_no_coalescence_curve(std::uint64_t population,
                                                         const AgeDistribution& dist,
                                                         const std::vector<double>& times,
                                                         std::uint64_t replicates,
                                                         std::uint64_t master_seed,
                                                         unsigned threads);

// (2/beta^2)(1 - 1/n): expected Kingman time to the MRCA under the beta^2 clock.
double expected_kingman_tmrca(std::uint32_t samples, double beta);

struct TmrcaBatch {
    std::vector<PairOutcome> outcomes;     // indexed by replicate
    std::uint64_t merged = 0;
    std::uint64_t censored = 0;
    SummaryEstimate conditional_mean_tau;  // over uncensored replicates only
    double censored_fraction() const noexcept;
};

TmrcaBatch simulate_tmrca_batch(std::uint64_t population, const AgeDistribution& dist,
                                std::uint64_t horizon, std::uint64_t replicates,
                                std::uint64_t master_seed, unsigned threads);

} // namespace seedbank
