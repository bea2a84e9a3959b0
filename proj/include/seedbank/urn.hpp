#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/rng.hpp"

namespace seedbank {

// Ball-count configuration of the n-sample urn chain: urn 1 holds the lineages
// renewing now, urn i the lineages whose next renewal is i generations ahead.
// Stored sparsely against a moving origin so the per-step shift is O(1) and a
// heavy-tailed relocation to an astronomically distant urn costs one map entry.
class UrnState {
public:
    UrnState() = default;
    // counts[0] is urn 1.
    static UrnState from_counts(const std::vector<std::uint64_t>& counts);

    std::uint64_t count(std::uint64_t urn) const;
    std::uint64_t first_urn_count() const { return count(1); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t max_occupied_urn() const;
    std::vector<std::uint64_t> dense(std::uint64_t up_to) const;

    friend UrnState step_urn(const UrnState& state, const AgeDistribution& dist, RngStream& rng);

private:
    std::map<std::uint64_t, std::uint64_t> slots_; // key = clock_ + urn index
    std::uint64_t clock_ = 0;
    std::uint64_t total_ = 0;
};

// One transition: the urn-1 balls relocate independently according to the age
// law, everything else shifts one urn down.
UrnState step_urn(const UrnState& state, const AgeDistribution& dist, RngStream& rng);

// Stationary law nu^n = Mult(n; beta_1, beta_2, ...), beta_i = tail(i)/mean.
double stationary_pmf(std::uint64_t n, const AgeDistribution& dist, const UrnState& state);
UrnState sample_stationary(std::uint64_t n, const AgeDistribution& dist, RngStream& rng);

// Exact stationarity check for finitely supported age laws: enumerates the
// reachable state space and returns max_y |sum_x nu(x) P(x,y) - nu(y)|.
double verify_stationarity_exact(std::uint64_t n, const AgeDistribution& dist,
                                 std::uint64_t max_states = 1'000'000);

// Leading O(1/N) term of the single-merger probability from state x:
//   (1/N) sum_i ( x_1 x_{i+1} pmf(i) + C(x_1,2) pmf(i)^2 ).
double single_merger_probability_leading(const UrnState& state, const AgeDistribution& dist,
                                         std::uint64_t sections);

// Exact probability of exactly one merger in the next step, by enumerating the
// relocation multinomial and the section-collision combinatorics per urn.
// Requires a finitely supported age law.
double exact_single_merger_probability(const UrnState& state, const AgeDistribution& dist,
                                       std::uint64_t sections);

// nu^n-averaged single-merger rate: beta_1^2 C(n,2) / N.
double stationary_merger_rate(std::uint64_t n, const AgeDistribution& dist,
                              std::uint64_t sections);

// Sectioned sample process: each urn is subdivided into N sections and balls
// sharing a section merge. Ball count mirrors the ancestral block count.
class SectionedUrnState {
public:
    // Balls start in the given urns (counts[0] = urn 1) with distinct uniform
    // sections within each urn.
    static SectionedUrnState start(const std::vector<std::uint64_t>& counts,
                                   std::uint64_t sections, RngStream& rng);

    // Advances one generation; returns the number of mergers in this step.
    std::uint64_t step(const AgeDistribution& dist, RngStream& rng);

    std::uint64_t ball_count() const noexcept { return balls_.size(); }
    std::uint64_t first_urn_count() const;

private:
    struct Ball {
        std::uint64_t slot; // clock + urn index
        std::uint64_t section;
    };
    std::vector<Ball> balls_;
    std::uint64_t clock_ = 0;
    std::uint64_t sections_ = 0;
};

} // namespace seedbank
