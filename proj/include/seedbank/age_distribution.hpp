#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "seedbank/rng.hpp"

namespace seedbank {

enum class AgeKind { dirac, explicit_table, power_law };

// Seed-bank age law: the distribution of the generation gap between an
// individual and its parent. Three families:
//   dirac(m)          point mass at m; dirac(1) is the classical Wright-Fisher case
//   explicit_table    finite pmf indexed from age 1
//   power_law(alpha)  tail(n) = n^(-alpha) exactly, pmf by tail differences
// Values are immutable after construction and safe to share across threads.
class AgeDistribution {
public:
    static AgeDistribution dirac(std::uint64_t m);
    static AgeDistribution explicit_table(std::vector<double> pmf);
    static AgeDistribution power_law(double alpha);

    AgeKind kind() const noexcept { return kind_; }

    // pmf(n) for age n >= 1.
    double pmf(std::uint64_t n) const;
    // tail(n) = sum_{k>=n} pmf(k); tail(1) = 1.
    double tail(std::uint64_t n) const;
    // Exact for dirac/explicit; zeta(alpha) for power_law alpha>1 (relative
    // error <= 1e-10); +infinity for power_law alpha <= 1.
    double mean() const noexcept { return mean_; }
    bool finite_mean() const noexcept;
    // beta = 1/mean (0 when the mean is infinite).
    double beta() const noexcept;

    // The standing model assumption pmf(1) > 0. Distributions violating it are
    // representable but flagged: the renewal process is then periodic and
    // coupling-based results do not apply.
    bool min_age_one() const noexcept;

    // Largest atom of the support, or 0 for unbounded support.
    std::uint64_t support_max() const noexcept;

    double alpha() const;          // power_law only
    std::uint64_t dirac_age() const; // dirac only

    std::uint64_t sample(RngStream& rng) const;

    // Conditional law on {1..j}, renormalized; always an explicit table.
    AgeDistribution truncated(std::uint64_t j) const;

    nlohmann::ordered_json to_json() const;
    static AgeDistribution from_json(const nlohmann::json& spec);
    std::string describe() const;

private:
    AgeDistribution() = default;

    AgeKind kind_ = AgeKind::dirac;
    double alpha_ = 0.0;
    std::uint64_t dirac_m_ = 1;
    std::vector<double> pmf_;  // explicit_table: pmf_[i] = pmf(i+1)
    std::vector<double> cdf_;  // explicit_table sampling table
    double mean_ = 1.0;
};

} // namespace seedbank
