#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "seedbank/kernels.hpp"

namespace seedbank::detail {

namespace {

// FFTW's planner is not thread-safe; plan creation/destruction serializes here.
// Execution runs lock-free on per-call buffers.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

constexpr std::size_t kBaseBlock = 512;

// Divide-and-conquer online convolution ("solve left, push its contribution
// onto the right, solve right"). For a block [lo,hi) the invariant on entry is
//   q[n] = sum_{j<lo} q_j pmf[n-j]   for n in [lo,hi),
// so the base case only has to complete each value with in-block history.
// Cyclic transforms of size next_pow2(hi-lo) cannot alias into the read range:
// wrapped products need j + k = n + M with j < mid-lo <= n, i.e. k > M.
class OnlineConvolver {
public:
    OnlineConvolver(const std::vector<double>& pmf, std::vector<double>& q)
        : pmf_(pmf), q_(q) {
        const std::size_t top = next_pow2(q.size());
        buf_bytes_ = (top + 2) * sizeof(double);
        a_ = static_cast<double*>(fftw_malloc(buf_bytes_));
        b_ = static_cast<double*>(fftw_malloc(buf_bytes_));
    }

    ~OnlineConvolver() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (auto& [size, plans] : plans_) {
            (void)size;
            fftw_destroy_plan(plans.fwd_a);
            fftw_destroy_plan(plans.fwd_b);
            fftw_destroy_plan(plans.inv_a);
        }
        fftw_free(a_);
        fftw_free(b_);
    }

    void run() {
        q_[0] = 1.0;
        solve(0, q_.size());
    }

private:
    struct PlanSet {
        fftw_plan fwd_a, fwd_b, inv_a;
    };

    PlanSet& plans_for(std::size_t m) {
        auto it = plans_.find(m);
        if (it != plans_.end()) return it->second;
        std::lock_guard<std::mutex> lock(planner_mutex());
        PlanSet p;
        auto* ca = reinterpret_cast<fftw_complex*>(a_);
        auto* cb = reinterpret_cast<fftw_complex*>(b_);
        p.fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(m), a_, ca, FFTW_ESTIMATE);
        p.fwd_b = fftw_plan_dft_r2c_1d(static_cast<int>(m), b_, cb, FFTW_ESTIMATE);
        p.inv_a = fftw_plan_dft_c2r_1d(static_cast<int>(m), ca, a_, FFTW_ESTIMATE);
        return plans_.emplace(m, p).first->second;
    }

    void solve(std::size_t lo, std::size_t hi) {
        const std::size_t len = hi - lo;
        if (len <= kBaseBlock) {
            for (std::size_t n = std::max<std::size_t>(lo, 1); n < hi; ++n) {
                const std::size_t m = std::min(n - lo, pmf_.size() - 1);
                if (m > 0) q_[n] += kernels::conv_point(pmf_.data(), q_.data() + n, m);
            }
            return;
        }
        const std::size_t mid = lo + len / 2;
        solve(lo, mid);
        push(lo, mid, hi);
        solve(mid, hi);
    }

    // q[mid..hi) += (q[lo..mid) * pmf)[.]
    void push(std::size_t lo, std::size_t mid, std::size_t hi) {
        const std::size_t m = next_pow2(hi - lo);
        PlanSet& plans = plans_for(m);
        std::memset(a_, 0, (m + 2) * sizeof(double));
        std::memcpy(a_, q_.data() + lo, (mid - lo) * sizeof(double));
        const std::size_t nb = std::min(m, pmf_.size());
        std::memcpy(b_, pmf_.data(), nb * sizeof(double));
        std::memset(b_ + nb, 0, (m + 2 - nb) * sizeof(double));
        fftw_execute(plans.fwd_a);
        fftw_execute(plans.fwd_b);
        kernels::complex_mul_scale(a_, b_, m / 2 + 1, 1.0 / static_cast<double>(m));
        fftw_execute(plans.inv_a);
        for (std::size_t n = mid; n < hi; ++n) q_[n] += a_[n - lo];
    }

    const std::vector<double>& pmf_;
    std::vector<double>& q_;
    double* a_ = nullptr;
    double* b_ = nullptr;
    std::size_t buf_bytes_ = 0;
    std::map<std::size_t, PlanSet> plans_;
};

} // namespace

void renewal_fill_fft(const std::vector<double>& pmf, std::vector<double>& q) {
    OnlineConvolver conv(pmf, q);
    conv.run();
}

} // namespace seedbank::detail
