#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace inoue {

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
// n and workers only, so results written per index do not depend on scheduling.
// The first exception thrown by the lowest-numbered chunk is rethrown.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body)
{
    const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || n < 2 * w) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t b = n * k / w, e = n * (k + 1) / w;
        pool.emplace_back([&, k, b, e] {
            try {
                body(b, e);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace inoue
