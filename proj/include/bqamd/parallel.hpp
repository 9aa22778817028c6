#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bqamd {

// Effective worker count: `requested` (0 = hardware default), capped by the
// BQAMD_THREADS environment variable when set.
inline int resolve_threads(int requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    int n = requested > 0 ? requested : static_cast<int>(hw);
    if (const char* env = std::getenv("BQAMD_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, n);
}

// Runs task(0..n_tasks-1) on a worker pool. Tasks must write only to their
// own output slots; result merging stays deterministic regardless of
// scheduling.
inline void parallel_for(int n_tasks, int threads, const std::function<void(int)>& task) {
    const int workers = std::min(resolve_threads(threads), n_tasks);
    if (workers <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= n_tasks) break;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace bqamd
