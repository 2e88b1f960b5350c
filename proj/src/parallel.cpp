#include "thermoporo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace thermoporo {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
    const char* env = std::getenv("THERMOPORO_THREADS");
    if (!env || !*env) return 0;
    try {
        return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

int thread_count() {
    if (const int n = g_override.load(); n > 0) return n;
    if (const int n = env_threads(); n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(int n) { g_override.store(std::max(0, n)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace thermoporo
