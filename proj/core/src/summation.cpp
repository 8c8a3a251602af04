#include "turbmax/summation.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace turbmax {

namespace {

// Chunk size is a fixed constant so that the partial-sum layout, and hence
// the bit pattern of the result, never depends on the worker count.
constexpr std::size_t kChunk = 256;

int read_thread_env() {
    const char* s = std::getenv("TURBMAX_THREADS");
    if (s != nullptr && *s != '\0') {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

int max_threads() { return read_thread_env(); }

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    if (n == 0) {
        return 0.0;
    }
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);

    const auto run_chunk = [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        CompensatedSum acc;
        for (std::size_t i = lo; i < hi; ++i) {
            acc.add(term(i));
        }
        partial[c] = acc.value();
    };

    const int workers = std::min<int>(max_threads(), static_cast<int>(chunks));
    if (workers <= 1 || chunks == 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = static_cast<std::size_t>(w); c < chunks;
                     c += static_cast<std::size_t>(workers)) {
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    CompensatedSum total;
    for (std::size_t c = 0; c < chunks; ++c) {
        total.add(partial[c]);
    }
    return total.value();
}

} // namespace turbmax
