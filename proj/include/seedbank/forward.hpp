#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "seedbank/age_distribution.hpp"
#include "seedbank/renewal.hpp"
#include "seedbank/rng.hpp"

namespace seedbank {

// Forward-in-time genealogy over a finite window: N individuals per generation,
// generations -(T+B)..0 where B is a burn-in margin below the reported window.
// Every vertex has one parent edge: generation offset ~ age law, label uniform.
// Parents below the materialized range are "external roots" identified by their
// exact (generation, label) coordinate, so two vertices that share an
// out-of-window ancestor are still joined.
struct GenealogyWindow {
    std::uint32_t population = 0;   // N
    std::uint32_t window_depth = 0; // T
    std::uint32_t burn_in = 0;      // B
    std::vector<std::int64_t> parent_generation;
    std::vector<std::uint32_t> parent_label; // 1..N

    std::uint64_t rows() const noexcept {
        return static_cast<std::uint64_t>(window_depth) + burn_in + 1;
    }
    std::int64_t bottom_generation() const noexcept {
        return -static_cast<std::int64_t>(window_depth) - burn_in;
    }
    std::size_t vertex(std::int64_t generation, std::uint32_t label) const noexcept {
        const auto row = static_cast<std::uint64_t>(generation - bottom_generation());
        return row * population + (label - 1);
    }
    // Fraction of vertices whose parent edge exits the materialized range
    // (finite-window bias disclosure).
    double external_parent_fraction() const;
};

GenealogyWindow build_genealogy(std::uint32_t population, std::uint32_t window_depth,
                                std::uint32_t burn_in, const AgeDistribution& dist,
                                RngStream& rng);

// Undirected connectivity of the window restricted to generations
// [lo_gen, hi_gen] plus the external roots referenced from that range.
// Parent chains only descend, so the restriction equals the marginal of the
// full forest's connectivity on those generations.
struct ComponentLabeling {
    std::int64_t lo_gen = 0;
    std::int64_t hi_gen = 0;
    std::uint32_t population = 0;
    std::uint32_t component_count = 0;
    std::vector<std::int32_t> component; // per vertex of the range, row-major

    struct ExternalRoot {
        std::int64_t generation;
        std::uint32_t label;
        std::int32_t component;
    };
    std::vector<ExternalRoot> external_roots;

    std::int32_t component_at(std::int64_t generation, std::uint32_t label) const noexcept {
        const auto row = static_cast<std::uint64_t>(generation - lo_gen);
        return component[row * population + (label - 1)];
    }
};

ComponentLabeling label_components(const GenealogyWindow& window, std::int64_t lo_gen,
                                   std::int64_t hi_gen);
ComponentLabeling label_components(const GenealogyWindow& window);

// One Bernoulli(p) draw per component (external-root components included);
// vertices inherit their component's type.
struct TypeField {
    double p = 0.0;
    std::int64_t lo_gen = 0;
    std::int64_t hi_gen = 0;
    std::uint32_t population = 0;
    std::vector<std::uint8_t> type_a;        // per vertex of the range
    std::vector<std::uint8_t> component_type; // per component id

    bool is_type_a(std::int64_t generation, std::uint32_t label) const noexcept {
        const auto row = static_cast<std::uint64_t>(generation - lo_gen);
        return type_a[row * population + (label - 1)] != 0;
    }
};

TypeField assign_types(const ComponentLabeling& labeling, double p, RngStream& rng);

// Y(i) = fraction of type-a individuals in generation i, for i in [from, to].
std::vector<double> frequency_series(const TypeField& types, std::int64_t from_gen,
                                     std::int64_t to_gen);

// Conditional type propagation: every vertex above the boundary generation
// receives the type of the first ancestor at or below it. Deterministic given
// the boundary types; no fresh type draws above the boundary.
struct BoundaryTypes {
    std::int64_t boundary_generation = 0;
    std::vector<std::uint8_t> vertex_type_a;   // full-window vertex indexing
    std::vector<std::uint8_t> vertex_provided; // full-window vertex indexing
    std::map<std::pair<std::int64_t, std::uint32_t>, bool> external;
};

TypeField propagate_types_conditional(const GenealogyWindow& window,
                                      const BoundaryTypes& boundary);

// Draws one Bernoulli(p) type per component of the sub-window at generations
// <= boundary (the boundary marginal of the component type measure).
BoundaryTypes draw_boundary_types_by_component(const GenealogyWindow& window,
                                               std::int64_t boundary_generation, double p,
                                               RngStream& rng);

// Individual-level type covariance between two individuals `lag` generations
// apart. Infinite-mean power law with alpha < 1/2:
//   p(1-p) * (sum_{n=0}^H q_n q_{n+lag}) / (N + sum_{n=1}^H q_n^2),
// where the lag = 0 numerator starts at n = 1 (distinct individuals).
// Any regime that meets almost surely gives p(1-p).
double exact_covariance(std::uint64_t population, const RenewalSequence& seq, std::uint64_t lag,
                        double p);
double exact_covariance(std::uint64_t population, const AgeDistribution& dist, std::uint64_t lag,
                        double p, std::uint64_t horizon);

// var(Y_N(i)) = p(1-p) * (sum_{n>=0} q_n^2) / (N + sum_{n>=1} q_n^2).
double exact_variance(std::uint64_t population, const RenewalSequence& seq, double p);

// N -> infinity correlation: cross_sum(lag) / (sum_q_squared + 1).
double limiting_correlation(const RenewalSequence& seq, std::uint64_t lag);

// Large-lag asymptote of the limiting correlation,
//   (1-a)^2 i^(2a-1) / (Gamma(2-a)^2 Gamma(2a) (sum q_n^2 + 1)),
// optionally multiplied by p(1-p) (off by default). The `adjusted` variant
// divides by 2cos(pi a), which the computed cross-sums actually converge to.
double asymptotic_correlation(double alpha, std::uint64_t lag, const RenewalSequence& seq,
                              bool include_type_variance_factor = false, double p = 0.5);
double asymptotic_correlation_adjusted(double alpha, std::uint64_t lag,
                                       const RenewalSequence& seq,
                                       bool include_type_variance_factor = false, double p = 0.5);

struct CorrelationRequest {
    std::uint64_t population = 0;
    std::uint32_t window_depth = 0;
    std::uint32_t burn_in = 0;
    AgeDistribution dist = AgeDistribution::dirac(1);
    double p = 0.5;
    std::vector<std::uint64_t> lags;
    std::uint64_t replicates = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    std::uint64_t exact_horizon = 0; // 0: skip formula columns
};

struct LagStat {
    std::uint64_t lag = 0;
    double cov = 0.0;
    double cov_std_error = 0.0;
    double corr = 0.0;
    double exact_cov = 0.0;   // NaN when skipped
    double bias_bound = 0.0;  // NaN when skipped
};

struct CorrelationReport {
    std::uint64_t replicates = 0;
    std::int64_t measurement_generation = 0;
    double mean_y = 0.0;
    double mean_y_std_error = 0.0;
    double var_y = 0.0;
    double var_y_std_error = 0.0;
    double exact_var = 0.0; // NaN when skipped
    double external_parent_fraction = 0.0;
    std::vector<LagStat> lags;
};

// Monte-Carlo oracle for the forward correlations: every replicate builds a
// window, types it, and contributes (Y(g0), Y(g0+lag)) pairs from the interior
// measurement generation g0 = -T/2.
CorrelationReport estimate_correlation_mc(const CorrelationRequest& request);

} // namespace seedbank
