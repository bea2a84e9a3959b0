#include "seedbank/urn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "seedbank/errors.hpp"

namespace seedbank {

namespace {

double require_mean(const AgeDistribution& dist, const char* what) {
    if (!dist.finite_mean())
        throw regime_error(std::string(what) +
                           " requires a finite-mean age distribution (power law needs alpha > 1)");
    return dist.mean();
}

// Visit all weak compositions of `total` into `parts` cells.
void for_each_composition(std::uint64_t total, std::size_t parts,
                          std::vector<std::uint64_t>& scratch, std::size_t at,
                          const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
    if (at + 1 == parts) {
        scratch[at] = total;
        fn(scratch);
        return;
    }
    for (std::uint64_t v = 0; v <= total; ++v) {
        scratch[at] = v;
        for_each_composition(total - v, parts, scratch, at + 1, fn);
    }
}

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// P(multinomial(total; probs) == r)
double multinomial_pmf(const std::vector<std::uint64_t>& r, std::uint64_t total,
                       const std::vector<double>& probs) {
    double logp = log_factorial(total);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0) continue;
        if (probs[i] <= 0.0) return 0.0;
        logp += static_cast<double>(r[i]) * std::log(probs[i]) - log_factorial(r[i]);
    }
    return std::exp(logp);
}

// Distribution of the number of mergers in one urn: `residents` balls already
// occupy distinct sections, `arrivals` balls land in uniform sections. Mergers
// = arrivals - (distinct free sections hit).
std::vector<double> urn_merger_pmf(std::uint64_t residents, std::uint64_t arrivals,
                                   std::uint64_t sections) {
    const double n = static_cast<double>(sections);
    std::vector<double> dist_d(arrivals + 1, 0.0);
    dist_d[0] = 1.0;
    for (std::uint64_t b = 0; b < arrivals; ++b) {
        std::vector<double> next(arrivals + 1, 0.0);
        for (std::uint64_t d = 0; d <= b; ++d) {
            if (dist_d[d] == 0.0) continue;
            const double occupied = static_cast<double>(residents + d) / n;
            next[d] += dist_d[d] * occupied;
            next[d + 1] += dist_d[d] * (1.0 - occupied);
        }
        dist_d = std::move(next);
    }
    std::vector<double> mergers(arrivals + 1, 0.0);
    for (std::uint64_t d = 0; d <= arrivals; ++d) mergers[arrivals - d] += dist_d[d];
    return mergers;
}

} // namespace

UrnState UrnState::from_counts(const std::vector<std::uint64_t>& counts) {
    UrnState s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        s.slots_[i + 1] = counts[i];
        s.total_ += counts[i];
    }
    return s;
}

std::uint64_t UrnState::count(std::uint64_t urn) const {
    if (urn < 1) throw invalid_parameter_error("urn indices start at 1");
    const auto it = slots_.find(clock_ + urn);
    return it == slots_.end() ? 0 : it->second;
}

std::uint64_t UrnState::max_occupied_urn() const {
    if (slots_.empty()) return 0;
    return slots_.rbegin()->first - clock_;
}

std::vector<std::uint64_t> UrnState::dense(std::uint64_t up_to) const {
    std::vector<std::uint64_t> out(up_to, 0);
    for (const auto& [slot, count] : slots_) {
        const std::uint64_t urn = slot - clock_;
        if (urn <= up_to) out[urn - 1] = count;
    }
    return out;
}

UrnState step_urn(const UrnState& state, const AgeDistribution& dist, RngStream& rng) {
    UrnState next = state;
    next.clock_ += 1;
    std::uint64_t moving = 0;
    const auto it = next.slots_.find(next.clock_);
    if (it != next.slots_.end()) {
        moving = it->second;
        next.slots_.erase(it);
    }
    for (std::uint64_t b = 0; b < moving; ++b) {
        const std::uint64_t age = dist.sample(rng);
        next.slots_[next.clock_ + age] += 1;
    }
    return next;
}

double stationary_pmf(std::uint64_t n, const AgeDistribution& dist, const UrnState& state) {
    const double mean = require_mean(dist, "stationary law nu^n");
    if (state.total() != n)
        throw invalid_parameter_error("stationary_pmf: state does not hold n balls");
    const std::uint64_t top = state.max_occupied_urn();
    double logp = log_factorial(n);
    for (std::uint64_t urn = 1; urn <= top; ++urn) {
        const std::uint64_t x = state.count(urn);
        if (x == 0) continue;
        const double beta_i = dist.tail(urn) / mean;
        if (beta_i <= 0.0) return 0.0;
        logp += static_cast<double>(x) * std::log(beta_i) - log_factorial(x);
    }
    return std::exp(logp);
}

UrnState sample_stationary(std::uint64_t n, const AgeDistribution& dist, RngStream& rng) {
    const double mean = require_mean(dist, "stationary sampling");
    std::vector<std::uint64_t> counts;
    auto place = [&](std::uint64_t urn) {
        if (counts.size() < urn) counts.resize(urn, 0);
        counts[urn - 1] += 1;
    };
    for (std::uint64_t b = 0; b < n; ++b) {
        const double u = rng.next_unit();
        const double target = u * mean;
        double acc = 0.0;
        std::uint64_t urn = 0;
        bool placed = false;
        // direct scan over the residual-age law beta_i = tail(i)/mean
        const std::uint64_t scan_limit = 4096;
        while (urn < scan_limit) {
            ++urn;
            acc += dist.tail(urn);
            if (acc > target) {
                place(urn);
                placed = true;
                break;
            }
        }
        if (placed) continue;
        if (dist.kind() != AgeKind::power_law)
            throw resource_error("stationary sampling walked past the support");
        // Power-law far tail: find the smallest I with R(I) <= goal where
        // R(I) = sum_{i>I} i^(-alpha), approximated by Euler-Maclaurin and
        // pinned to the exact remainder at the scan limit.
        const double alpha = dist.alpha();
        const double remaining = mean - acc; // exact R(scan_limit)
        const double want = target - acc;    // in [0, remaining)
        const double goal = remaining - want;
        auto approx_tail = [alpha](double big_i) {
            return std::pow(big_i, 1.0 - alpha) / (alpha - 1.0) -
                   0.5 * std::pow(big_i, -alpha) +
                   alpha / 12.0 * std::pow(big_i, -alpha - 1.0);
        };
        const double shim = approx_tail(static_cast<double>(scan_limit)) - remaining;
        std::uint64_t lo = scan_limit, hi = 2 * scan_limit;
        while (approx_tail(static_cast<double>(hi)) - shim > goal &&
               hi < (std::uint64_t{1} << 62)) {
            lo = hi;
            hi *= 2;
        }
        while (lo + 1 < hi) {
            const std::uint64_t midpoint = lo + (hi - lo) / 2;
            if (approx_tail(static_cast<double>(midpoint)) - shim > goal)
                lo = midpoint;
            else
                hi = midpoint;
        }
        place(hi);
    }
    return UrnState::from_counts(counts);
}

double verify_stationarity_exact(std::uint64_t n, const AgeDistribution& dist,
                                 std::uint64_t max_states) {
    const std::uint64_t j = dist.support_max();
    if (j == 0)
        throw invalid_parameter_error(
            "verify_stationarity_exact requires a finitely supported age distribution");
    // state count = C(n+j-1, j-1)
    double state_count = 1.0;
    for (std::uint64_t i = 1; i < j; ++i)
        state_count *= static_cast<double>(n + i) / static_cast<double>(i);
    if (state_count > static_cast<double>(max_states))
        throw resource_error("stationarity check state space exceeds the enumeration budget");

    std::vector<double> pmf(j), beta(j);
    const double mean = require_mean(dist, "stationary law nu^n");
    for (std::uint64_t i = 1; i <= j; ++i) {
        pmf[i - 1] = dist.pmf(i);
        beta[i - 1] = dist.tail(i) / mean;
    }

    std::vector<std::vector<std::uint64_t>> states;
    std::map<std::vector<std::uint64_t>, std::size_t> index;
    {
        std::vector<std::uint64_t> scratch(j, 0);
        for_each_composition(n, j, scratch, 0, [&](const std::vector<std::uint64_t>& x) {
            index.emplace(x, states.size());
            states.push_back(x);
        });
    }

    std::vector<double> nu(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        double logp = log_factorial(n);
        bool possible = true;
        for (std::uint64_t i = 0; i < j; ++i) {
            if (states[s][i] == 0) continue;
            if (beta[i] <= 0.0) { possible = false; break; }
            logp += static_cast<double>(states[s][i]) * std::log(beta[i]) -
                    log_factorial(states[s][i]);
        }
        nu[s] = possible ? std::exp(logp) : 0.0;
    }

    std::vector<double> flow(states.size(), 0.0);
    std::vector<std::uint64_t> scratch(j, 0);
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto& x = states[s];
        std::vector<std::uint64_t> shifted(j, 0);
        for (std::uint64_t i = 1; i < j; ++i) shifted[i - 1] = x[i];
        for_each_composition(x[0], j, scratch, 0, [&](const std::vector<std::uint64_t>& r) {
            const double pr = multinomial_pmf(r, x[0], pmf);
            if (pr == 0.0) return;
            std::vector<std::uint64_t> y(j);
            for (std::uint64_t i = 0; i < j; ++i) y[i] = shifted[i] + r[i];
            flow[index.at(y)] += nu[s] * pr;
        });
    }

    double worst = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s)
        worst = std::max(worst, std::abs(flow[s] - nu[s]));
    return worst;
}

double single_merger_probability_leading(const UrnState& state, const AgeDistribution& dist,
                                         std::uint64_t sections) {
    if (sections < state.total())
        throw invalid_parameter_error("section count must be >= the number of balls");
    const std::uint64_t x1 = state.first_urn_count();
    const double pairs = 0.5 * static_cast<double>(x1) * static_cast<double>(x1 ? x1 - 1 : 0);
    double acc = 0.0;
    // resident term: only occupied urns contribute
    const std::uint64_t top = state.max_occupied_urn();
    for (std::uint64_t i = 1; i + 1 <= top; ++i) {
        const std::uint64_t resident = state.count(i + 1);
        if (resident > 0)
            acc += static_cast<double>(x1) * static_cast<double>(resident) * dist.pmf(i);
    }
    // arrival-pair term: sum pmf(i)^2 over the support
    if (pairs > 0.0) {
        double sq = 0.0;
        const std::uint64_t sup = dist.support_max();
        if (sup > 0) {
            for (std::uint64_t i = 1; i <= sup; ++i) sq += dist.pmf(i) * dist.pmf(i);
        } else {
            for (std::uint64_t i = 1; i <= 10'000'000; ++i) {
                const double p = dist.pmf(i);
                sq += p * p;
                if (p * p < 1e-18 * sq) break;
            }
        }
        acc += pairs * sq;
    }
    return acc / static_cast<double>(sections);
}

double exact_single_merger_probability(const UrnState& state, const AgeDistribution& dist,
                                       std::uint64_t sections) {
    const std::uint64_t j = dist.support_max();
    if (j == 0)
        throw invalid_parameter_error(
            "exact merger enumeration requires a finitely supported age distribution");
    if (sections < state.total())
        throw invalid_parameter_error("section count must be >= the number of balls");
    const std::uint64_t x1 = state.first_urn_count();
    const std::uint64_t top = state.max_occupied_urn();
    const std::uint64_t urns = std::max(j, top > 0 ? top - 1 : 0);

    std::vector<std::uint64_t> residents(urns, 0);
    for (std::uint64_t i = 1; i <= urns; ++i) residents[i - 1] = state.count(i + 1);
    std::vector<double> pmf(j);
    for (std::uint64_t i = 1; i <= j; ++i) pmf[i - 1] = dist.pmf(i);

    double exactly_one = 0.0;
    std::vector<std::uint64_t> scratch(j, 0);
    for_each_composition(x1, j, scratch, 0, [&](const std::vector<std::uint64_t>& r) {
        const double pr = multinomial_pmf(r, x1, pmf);
        if (pr == 0.0) return;
        // convolve per-urn merger counts, tracking 0 and 1 total mergers
        double p_zero = 1.0, p_one = 0.0;
        for (std::uint64_t i = 0; i < j; ++i) {
            if (r[i] == 0) continue;
            const auto pm = urn_merger_pmf(residents[i], r[i], sections);
            const double one = pm.size() > 1 ? pm[1] : 0.0;
            p_one = p_one * pm[0] + p_zero * one;
            p_zero *= pm[0];
        }
        exactly_one += pr * p_one;
    });
    return exactly_one;
}

double stationary_merger_rate(std::uint64_t n, const AgeDistribution& dist,
                              std::uint64_t sections) {
    const double mean = require_mean(dist, "stationary merger rate");
    const double beta1 = 1.0 / mean; // tail(1) = 1
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return beta1 * beta1 * pairs / static_cast<double>(sections);
}

SectionedUrnState SectionedUrnState::start(const std::vector<std::uint64_t>& counts,
                                           std::uint64_t sections, RngStream& rng) {
    SectionedUrnState s;
    s.sections_ = sections;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::uint64_t b = 0; b < counts[i]; ++b) {
            // distinct uniform section within the urn
            while (true) {
                const std::uint64_t sec = rng.next_below(sections) + 1;
                bool taken = false;
                for (const Ball& other : s.balls_)
                    if (other.slot == i + 1 && other.section == sec) taken = true;
                if (!taken) {
                    s.balls_.push_back({i + 1, sec});
                    break;
                }
            }
        }
    }
    return s;
}

std::uint64_t SectionedUrnState::step(const AgeDistribution& dist, RngStream& rng) {
    clock_ += 1;
    for (Ball& ball : balls_) {
        if (ball.slot == clock_) {
            ball.slot = clock_ + dist.sample(rng);
            ball.section = rng.next_below(sections_) + 1;
        }
    }
    // merge duplicates, keeping the earliest ball
    std::uint64_t mergers = 0;
    std::vector<Ball> kept;
    kept.reserve(balls_.size());
    for (const Ball& ball : balls_) {
        bool dup = false;
        for (const Ball& other : kept)
            if (other.slot == ball.slot && other.section == ball.section) dup = true;
        if (dup)
            ++mergers;
        else
            kept.push_back(ball);
    }
    balls_ = std::move(kept);
    return mergers;
}

std::uint64_t SectionedUrnState::first_urn_count() const {
    std::uint64_t c = 0;
    for (const Ball& ball : balls_)
        if (ball.slot == clock_ + 1) ++c;
    return c;
}

} // namespace seedbank
