#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace seedbank {

struct SummaryEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;
    std::uint64_t censored = 0;
};

SummaryEstimate summarize(std::span<const double> samples);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov against an evaluable CDF. Samples must be
// sorted ascending. The p-value uses the asymptotic Kolmogorov distribution
// with the Stephens small-sample correction; conservative for n >= 50.
KsResult ks_statistic(std::span<const double> sorted_samples,
                      const std::function<double(double)>& cdf);

// Survival function of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{k-1} e^{-2k^2x^2}.
double kolmogorov_q(double x);

struct ChiSquareResult {
    double statistic = 0.0;
    unsigned dof = 0;
    double p_value = 0.0;
};

// Pearson goodness-of-fit with trailing cells pooled until every retained cell
// has expected count >= 5. Needs at least two retained cells.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probs);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

} // namespace seedbank
