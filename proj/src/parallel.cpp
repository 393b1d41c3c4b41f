#include "patchlum/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace patchlum {

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("PATCHLUM_THREADS")) {
        try {
            const long requested = std::stol(cap);
            if (requested >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(requested));
        } catch (const std::exception&) {
            // Unparsable cap: keep the hardware default.
        }
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace patchlum
