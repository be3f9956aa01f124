#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace uqlearn {

// Process-wide worker count for parallel_for. The CLI sets this from --jobs;
// library defaults to 1 so results never depend on the host's core count
// unless the caller opts in.
int worker_count();
void set_worker_count(int n);

// Runs body(i) for i in [0, n). Each index writes only to its own
// pre-assigned slot, so outputs are identical for any worker count or
// schedule. The first exception thrown by any body is rethrown.
inline void parallel_for(size_t n, const std::function<void(size_t)>& body, int jobs = 0) {
    if (jobs <= 0) jobs = worker_count();
    int threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(jobs), n));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace uqlearn
