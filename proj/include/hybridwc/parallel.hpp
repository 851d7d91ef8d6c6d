#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hybridwc {

// Worker count: hardware concurrency capped by HYBRIDWC_THREADS.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("HYBRIDWC_THREADS")) {
        long v = std::atol(env);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return hw;
}

// Runs f(i) for i in [0, n) on the thread budget.  Work items must be
// independent; the only shared state is the index counter.  The first
// exception wins and is rethrown once all workers drain.
template <class F>
void parallel_for(size_t n, F&& f) {
    unsigned workers = std::min<size_t>(thread_budget(), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load()) {
                size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    f(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace hybridwc
