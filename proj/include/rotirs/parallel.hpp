#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rotirs {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Callers write results by index, so the outcome does not depend
/// on scheduling. The first exception thrown by any task is rethrown here.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace rotirs
