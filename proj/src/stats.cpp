#include "seedbank/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "seedbank/errors.hpp"

namespace seedbank {

SummaryEstimate summarize(std::span<const double> samples) {
    if (samples.empty()) throw invalid_parameter_error("summarize requires at least one sample");
    SummaryEstimate s;
    s.count = samples.size();
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    if (samples.size() > 1) var /= static_cast<double>(samples.size() - 1);
    s.mean = mean;
    s.std_error = std::sqrt(var / static_cast<double>(samples.size()));
    return s;
}

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_statistic(std::span<const double> sorted_samples,
                      const std::function<double(double)>& cdf) {
    const std::size_t n = sorted_samples.size();
    if (n < 10) throw invalid_parameter_error("ks_statistic requires at least 10 samples");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end()))
        throw invalid_parameter_error("ks_statistic requires sorted samples");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sorted_samples[i]);
        d = std::max(d, f - static_cast<double>(i) / static_cast<double>(n));
        d = std::max(d, static_cast<double>(i + 1) / static_cast<double>(n) - f);
    }
    const double sn = std::sqrt(static_cast<double>(n));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probs) {
    if (observed.size() != expected_probs.size())
        throw invalid_parameter_error("chi_square_gof: observed/expected size mismatch");
    if (observed.empty()) throw invalid_parameter_error("chi_square_gof: empty input");
    std::uint64_t total = 0;
    for (auto c : observed) total += c;
    if (total == 0) throw invalid_parameter_error("chi_square_gof: all-zero observations");

    // Pool trailing cells until the pooled expectation reaches 5.
    struct Cell {
        double obs, exp;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < observed.size(); ++i)
        cells.push_back({static_cast<double>(observed[i]),
                         expected_probs[i] * static_cast<double>(total)});
    while (cells.size() > 1 && cells.back().exp < 5.0) {
        Cell last = cells.back();
        cells.pop_back();
        cells.back().obs += last.obs;
        cells.back().exp += last.exp;
    }
    // A short head cell can also fall under the threshold; merge forward.
    std::vector<Cell> pooled;
    for (const Cell& c : cells) {
        if (!pooled.empty() && pooled.back().exp < 5.0) {
            pooled.back().obs += c.obs;
            pooled.back().exp += c.exp;
        } else {
            pooled.push_back(c);
        }
    }
    if (pooled.size() < 2)
        throw invalid_parameter_error("chi_square_gof: fewer than two cells after pooling");

    ChiSquareResult r;
    for (const Cell& c : pooled) {
        if (c.exp <= 0.0)
            throw invalid_parameter_error("chi_square_gof: zero expected mass in a retained cell");
        r.statistic += (c.obs - c.exp) * (c.obs - c.exp) / c.exp;
    }
    r.dof = static_cast<unsigned>(pooled.size() - 1);
    r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
    return r;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials < 1) throw invalid_parameter_error("wilson_interval requires trials >= 1");
    if (successes > trials)
        throw invalid_parameter_error("wilson_interval requires successes <= trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace seedbank
