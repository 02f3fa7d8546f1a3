// Small shared helpers: bounded parallel loops and a stable content checksum
// for report manifests.

#ifndef PARSEMBLE_UTIL_HPP
#define PARSEMBLE_UTIL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace parsemble {

// Runs fn(0..n-1) on up to `jobs` worker threads (jobs <= 1: inline, in
// order). Iterations must be independent; exceptions are rethrown on the
// caller thread (the first one wins).
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers = jobs > 1 ? std::size_t(jobs) : 1;
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// 64-bit FNV-1a over a byte string; used to fingerprint inputs in report
// headers without depending on file timestamps.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace parsemble

#endif  // PARSEMBLE_UTIL_HPP
