#include "seedbank/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "seedbank/errors.hpp"
#include "seedbank/kernels.hpp"

namespace seedbank {

namespace detail {
// renewal_fft.cpp
void renewal_fill_fft(const std::vector<double>& pmf, std::vector<double>& q);
} // namespace detail

namespace {

constexpr std::uint64_t kDirectAutoLimit = 32'768;
// Horizons above ~2e8 would need several GB for q plus transform scratch.
constexpr std::uint64_t kHorizonLimit = 200'000'000;

std::vector<double> cache_pmf(const AgeDistribution& dist, std::uint64_t up_to) {
    std::vector<double> pmf(up_to + 1, 0.0);
    const std::uint64_t sup = dist.support_max();
    const std::uint64_t last = sup == 0 ? up_to : std::min(up_to, sup);
    for (std::uint64_t k = 1; k <= last; ++k) pmf[k] = dist.pmf(k);
    return pmf;
}

void fill_direct(const std::vector<double>& pmf, std::vector<double>& q) {
    const std::uint64_t H = q.size() - 1;
    const std::uint64_t width = pmf.size() - 1;
    q[0] = 1.0;
    for (std::uint64_t n = 1; n <= H; ++n)
        q[n] = kernels::conv_point(pmf.data(), q.data() + n, std::min(n, width));
}

} // namespace

RenewalSequence compute_renewal_sequence(const AgeDistribution& dist, std::uint64_t horizon,
                                         RenewalMethod method) {
    if (horizon > kHorizonLimit)
        throw resource_error("renewal horizon exceeds the memory budget; stay below 2e8 "
                             "or split the analysis over smaller horizons");
    if (method == RenewalMethod::automatic) {
        const bool small = horizon <= kDirectAutoLimit;
        const bool finite_support = dist.support_max() != 0;
        method = (small || finite_support) ? RenewalMethod::direct : RenewalMethod::fft;
    }
    RenewalSequence seq;
    seq.q.assign(horizon + 1, 0.0);
    const auto pmf = cache_pmf(dist, horizon);
    if (method == RenewalMethod::direct) {
        fill_direct(pmf, seq.q);
    } else {
        detail::renewal_fill_fft(pmf, seq.q);
    }
    return seq;
}

double renewal_equation_residual(const AgeDistribution& dist, const RenewalSequence& seq) {
    const std::uint64_t H = seq.horizon();
    const auto pmf = cache_pmf(dist, H);
    const std::uint64_t width = pmf.size() - 1;
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= H; ++n) {
        const double rhs = kernels::conv_point(pmf.data(), seq.q.data() + n, std::min(n, width));
        worst = std::max(worst, std::abs(seq.q[n] - rhs));
    }
    return worst;
}

TailSum sum_q_squared(const RenewalSequence& seq) { return cross_sum(seq, 0); }

TailSum cross_sum(const RenewalSequence& seq, std::uint64_t lag) {
    const std::uint64_t H = seq.horizon();
    TailSum out;
    if (lag > H) return out;
    const std::uint64_t count = H - lag + 1;
    out.value = kernels::dot(seq.q.data(), seq.q.data() + lag, count);
    // trailing tenth, by the n index of the leading factor
    const std::uint64_t start = count - count / 10;
    out.tail_increment = kernels::dot(seq.q.data() + start, seq.q.data() + start + lag,
                                      count - start);
    return out;
}

double partial_sum(const RenewalSequence& seq, std::uint64_t i) {
    if (i > seq.horizon())
        throw invalid_parameter_error("partial_sum index exceeds the computed horizon");
    double acc = 0.0;
    for (std::uint64_t n = 0; n <= i; ++n) acc += seq.q[n];
    return acc;
}

McEstimate mc_renewal_probability(const AgeDistribution& dist, std::uint64_t n,
                                  std::uint64_t reps, RngStream& rng) {
    if (reps < 1) throw invalid_parameter_error("mc_renewal_probability requires reps >= 1");
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        std::uint64_t s = 0;
        while (s < n) s += dist.sample(rng);
        hits += (s == n);
    }
    McEstimate est;
    est.reps = reps;
    est.estimate = static_cast<double>(hits) / static_cast<double>(reps);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(reps));
    return est;
}

std::vector<McEstimate> mc_renewal_profile(const AgeDistribution& dist, std::uint64_t n_max,
                                           std::uint64_t reps, std::uint64_t master_seed,
                                           unsigned threads) {
    if (reps < 1) throw invalid_parameter_error("mc_renewal_profile requires reps >= 1");
    if (threads == 0) threads = 1;
    std::vector<std::vector<std::uint64_t>> counts(threads,
                                                   std::vector<std::uint64_t>(n_max + 1, 0));
    auto worker = [&](unsigned w) {
        auto& local = counts[w];
        for (std::uint64_t r = w; r < reps; r += threads) {
            RngStream rng = replicate_stream(master_seed, r);
            std::uint64_t s = 0;
            while (s <= n_max) {
                local[s] += 1;
                s += dist.sample(rng);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    // integer reduction: order-independent, so the result is thread-count invariant
    std::vector<McEstimate> out(n_max + 1);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        std::uint64_t hits = 0;
        for (unsigned w = 0; w < threads; ++w) hits += counts[w][n];
        out[n].reps = reps;
        out[n].estimate = static_cast<double>(hits) / static_cast<double>(reps);
        out[n].std_error =
            std::sqrt(out[n].estimate * (1.0 - out[n].estimate) / static_cast<double>(reps));
    }
    return out;
}

double tauberian_partial_sum_asymptote(double alpha, std::uint64_t i) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_parameter_error("partial-sum asymptote requires alpha in (0,1)");
    if (i < 1) throw invalid_parameter_error("asymptote index must be >= 1");
    const double c = (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::tgamma(1.0 + alpha));
    return c * std::pow(static_cast<double>(i), alpha);
}

double tauberian_cross_sum_asymptote(double alpha, std::uint64_t i) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw invalid_parameter_error("cross-sum asymptote requires alpha in (0,1/2)");
    if (i < 1) throw invalid_parameter_error("asymptote index must be >= 1");
    const double g = std::tgamma(2.0 - alpha);
    const double c = (1.0 - alpha) * (1.0 - alpha) / (g * g * std::tgamma(2.0 * alpha));
    return c * std::pow(static_cast<double>(i), 2.0 * alpha - 1.0);
}

double tauberian_cross_sum_asymptote_adjusted(double alpha, std::uint64_t i) {
    return tauberian_cross_sum_asymptote(alpha, i) / (2.0 * std::cos(M_PI * alpha));
}

} // namespace seedbank
