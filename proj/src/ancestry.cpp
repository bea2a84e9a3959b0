#include "seedbank/ancestry.hpp"

#include <algorithm>
#include <cmath>

#include "seedbank/errors.hpp"
#include "seedbank/parallel.hpp"

namespace seedbank {

PairOutcome simulate_pair_tmrca(std::uint64_t population, const AgeDistribution& dist,
                                std::uint64_t horizon, RngStream& rng) {
    if (population < 2) throw invalid_parameter_error("pair simulation requires N >= 2");
    if (horizon < 1) throw invalid_parameter_error("pair simulation requires horizon >= 1");
    std::uint64_t a = dist.sample(rng);
    std::uint64_t b = dist.sample(rng);
    while (true) {
        if (a == b) {
            if (a > horizon) return {false, horizon};
            if (rng.next_below(population) == 0) return {true, a};
            a += dist.sample(rng);
            b += dist.sample(rng);
        } else if (a < b) {
            if (b > horizon) return {false, horizon};
            a += dist.sample(rng);
        } else {
            if (a > horizon) return {false, horizon};
            b += dist.sample(rng);
        }
    }
}

std::uint32_t PartitionTrajectory::final_blocks() const noexcept {
    std::uint32_t blocks = initial_blocks;
    for (const MergeEvent& e : events) blocks -= static_cast<std::uint32_t>(e.blocks.size() - 1);
    return blocks;
}

std::uint32_t PartitionTrajectory::block_count_at(std::uint64_t generation) const noexcept {
    std::uint32_t blocks = initial_blocks;
    for (const MergeEvent& e : events) {
        if (e.generation > generation) break;
        blocks -= static_cast<std::uint32_t>(e.blocks.size() - 1);
    }
    return blocks;
}

PartitionTrajectory simulate_ancestral_partition(std::uint64_t population, std::uint32_t samples,
                                                 const AgeDistribution& dist,
                                                 std::uint64_t horizon, RngStream& rng) {
    if (samples > population)
        throw invalid_parameter_error("sample size cannot exceed the population size");
    if (samples < 2) throw invalid_parameter_error("partition simulation requires n >= 2");

    struct Lineage {
        std::uint64_t next_renewal;
        std::uint32_t block;
    };
    std::vector<Lineage> lineages(samples);
    for (std::uint32_t i = 0; i < samples; ++i)
        lineages[i] = {dist.sample(rng), i + 1};

    PartitionTrajectory traj;
    traj.initial_blocks = samples;
    traj.horizon = horizon;

    while (lineages.size() > 1) {
        std::uint64_t t = lineages[0].next_renewal;
        for (const Lineage& l : lineages) t = std::min(t, l.next_renewal);
        if (t > horizon) break;

        // lineages renewing at t draw uniform labels; shared labels merge
        std::vector<std::pair<std::uint64_t, std::size_t>> draws; // (label, lineage idx)
        for (std::size_t i = 0; i < lineages.size(); ++i)
            if (lineages[i].next_renewal == t)
                draws.emplace_back(rng.next_below(population), i);

        std::vector<bool> dead(lineages.size(), false);
        for (std::size_t i = 0; i < draws.size(); ++i) {
            if (dead[draws[i].second]) continue;
            std::vector<std::size_t> group{draws[i].second};
            for (std::size_t k = i + 1; k < draws.size(); ++k)
                if (!dead[draws[k].second] && draws[k].first == draws[i].first)
                    group.push_back(draws[k].second);
            if (group.size() > 1) {
                MergeEvent event;
                event.generation = t;
                std::uint32_t survivor_block = lineages[group[0]].block;
                for (std::size_t idx : group) {
                    event.blocks.push_back(lineages[idx].block);
                    survivor_block = std::min(survivor_block, lineages[idx].block);
                }
                std::sort(event.blocks.begin(), event.blocks.end());
                // lowest block label survives and its renewal process continues
                lineages[group[0]].block = survivor_block;
                for (std::size_t k = 1; k < group.size(); ++k) dead[group[k]] = true;
                traj.events.push_back(std::move(event));
            }
        }
        std::vector<Lineage> alive;
        alive.reserve(lineages.size());
        for (std::size_t i = 0; i < lineages.size(); ++i) {
            if (dead[i]) continue;
            Lineage l = lineages[i];
            if (l.next_renewal == t) l.next_renewal = t + dist.sample(rng);
            alive.push_back(l);
        }
        lineages = std::move(alive);
    }
    return traj;
}

double meeting_probability_truncated(std::uint64_t population, const RenewalSequence& seq,
                                     std::uint64_t lag) {
    const TailSum squares = sum_q_squared(seq);
    const double s1 = squares.value - 1.0; // sum_{n>=1} q_n^2
    double numerator;
    if (lag == 0) {
        numerator = s1;
    } else {
        numerator = cross_sum(seq, lag).value;
    }
    return numerator / (static_cast<double>(population) + s1);
}

double exact_meeting_probability(std::uint64_t population, const AgeDistribution& dist,
                                 std::uint64_t lag, std::uint64_t horizon) {
    if (population < 2) throw invalid_parameter_error("meeting probability requires N >= 2");
    const RenewalSequence seq = compute_renewal_sequence(dist, horizon);
    const TailSum squares = sum_q_squared(seq);
    if (!squares.converged(1e-3))
        throw regime_error(
            "exact meeting probability requires sum q_n^2 convergent (power law alpha < 1/2); "
            "for alpha in (1/2,1) the meeting probability is 1");
    return meeting_probability_truncated(population, seq, lag);
}

std::vector<SurvivalPoint> pairwise_no_coalescence_curve(std::uint64_t population,
                                                         const AgeDistribution& dist,
                                                         const std::vector<double>& times,
                                                         std::uint64_t replicates,
                                                         std::uint64_t master_seed,
                                                         unsigned threads) {
    if (!dist.finite_mean())
        throw regime_error("survival curve requires a finite-mean age distribution");
    const double beta = dist.beta();
    double t_max = 0.0;
    for (double t : times) {
        if (t < 0.0) throw invalid_parameter_error("survival times must be >= 0");
        t_max = std::max(t_max, t);
    }
    // horizon far beyond the largest requested time so censoring is negligible;
    // censored replicates are counted as survivors and reported via the interval
    const auto horizon = static_cast<std::uint64_t>(
        static_cast<double>(population) * (t_max + 64.0 / (beta * beta)));

    std::vector<std::uint64_t> taus = map_replicates<std::uint64_t>(
        replicates, threads, [&](std::uint64_t rep) {
            RngStream rng = replicate_stream(master_seed, rep);
            const PairOutcome out = simulate_pair_tmrca(population, dist, horizon, rng);
            return out.merged ? out.generation : horizon + 1;
        });

    std::vector<SurvivalPoint> curve;
    curve.reserve(times.size());
    for (double t : times) {
        const double cut = static_cast<double>(population) * t;
        std::uint64_t surviving = 0;
        for (std::uint64_t tau : taus)
            if (static_cast<double>(tau) > cut) ++surviving;
        SurvivalPoint pt;
        pt.t = t;
        pt.survival = static_cast<double>(surviving) / static_cast<double>(replicates);
        pt.wilson = wilson_interval(surviving, replicates, 1.959963984540054);
        pt.reference = std::exp(-beta * beta * t);
        curve.push_back(pt);
    }
    return curve;
}

double expected_kingman_tmrca(std::uint32_t samples, double beta) {
    if (samples < 2) throw invalid_parameter_error("expected_kingman_tmrca requires n >= 2");
    if (!(beta > 0.0)) throw invalid_parameter_error("expected_kingman_tmrca requires beta > 0");
    return 2.0 / (beta * beta) * (1.0 - 1.0 / static_cast<double>(samples));
}

double TmrcaBatch::censored_fraction() const noexcept {
    const double total = static_cast<double>(merged + censored);
    return total > 0.0 ? static_cast<double>(censored) / total : 0.0;
}

TmrcaBatch simulate_tmrca_batch(std::uint64_t population, const AgeDistribution& dist,
                                std::uint64_t horizon, std::uint64_t replicates,
                                std::uint64_t master_seed, unsigned threads) {
    TmrcaBatch batch;
    batch.outcomes = map_replicates<PairOutcome>(
        replicates, threads, [&](std::uint64_t rep) {
            RngStream rng = replicate_stream(master_seed, rep);
            return simulate_pair_tmrca(population, dist, horizon, rng);
        });
    std::vector<double> taus;
    taus.reserve(replicates);
    for (const PairOutcome& out : batch.outcomes) {
        if (out.merged) {
            ++batch.merged;
            taus.push_back(static_cast<double>(out.generation));
        } else {
            ++batch.censored;
        }
    }
    if (!taus.empty()) {
        batch.conditional_mean_tau = summarize(taus);
        batch.conditional_mean_tau.censored = batch.censored;
    }
    return batch;
}

} // namespace seedbank
