#include "hardy/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace hardy {

namespace {

std::atomic<int> g_thread_cap{0}; // 0 = hardware default

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

thread_local bool t_inside_parallel = false;

} // namespace

int max_threads() {
    int cap = g_thread_cap.load(std::memory_order_relaxed);
    return cap > 0 ? cap : hardware_threads();
}

void set_max_threads(int n) { g_thread_cap.store(n, std::memory_order_relaxed); }

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 32) {
        double acc = 0.0;
        for (double x : xs) acc += x;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void parallel_for(std::size_t n, std::size_t min_grain,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    min_grain = std::max<std::size_t>(min_grain, 1);
    const int workers = std::min<std::size_t>(max_threads(), (n + min_grain - 1) / min_grain);
    if (workers <= 1 || t_inside_parallel) {
        t_inside_parallel = true;
        try {
            fn(0, n);
        } catch (...) {
            t_inside_parallel = false;
            throw;
        }
        t_inside_parallel = false;
        return;
    }

    // Chunk grid depends only on n and min_grain, never on the worker count.
    const std::size_t chunk = std::max(min_grain, n / 64 + 1);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        t_inside_parallel = true;
        try {
            for (;;) {
                const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= chunks) break;
                const std::size_t lo = c * chunk;
                const std::size_t hi = std::min(n, lo + chunk);
                fn(lo, hi);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
        t_inside_parallel = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace hardy
