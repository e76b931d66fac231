#ifndef DECOH_PARALLEL_HPP
#define DECOH_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace decoh {

/* Index-parallel loop with a static block partition. Work items must write
 * only to their own index, so the result is identical for any thread count
 * (determinism is part of the output contract). */
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(std::size_t(threads), n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nw);
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = n * w / nw;
            const std::size_t hi = n * (w + 1) / nw;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace decoh

#endif
