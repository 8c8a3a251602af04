#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace turbmax {

/// Neumaier variant of compensated (Kahan) summation.  Accumulation order is
/// whatever order add() is called in; callers that need reproducible results
/// must feed terms in a fixed order.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Maximum worker thread count: TURBMAX_THREADS if set to a positive integer,
/// otherwise std::thread::hardware_concurrency().
int max_threads();

/// Deterministic reduction of term(0) + ... + term(n-1).
///
/// The index range is split into fixed-size chunks; each chunk is summed with
/// compensated summation and the chunk partials are combined in chunk order.
/// Chunk boundaries do not depend on the thread count, so the result is
/// bit-identical whether the chunks run serially or on a pool of up to
/// max_threads() workers.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term);

} // namespace turbmax
