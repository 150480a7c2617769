#include "ggmeval/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace ggm {

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("GGM_EVAL_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

namespace {
thread_local bool tl_inside_worker = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    int workers = max_threads();
    // nested calls run serially so pools don't multiply
    if (workers == 1 || n == 1 || tl_inside_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = std::max<std::size_t>(1, n / (4 * workers));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        const bool prev = tl_inside_worker;
        tl_inside_worker = true;
        for (;;) {
            std::size_t lo = next.fetch_add(chunk);
            if (lo >= n) break;
            std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
        tl_inside_worker = prev;
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace ggm
