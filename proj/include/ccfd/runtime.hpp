#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ccfd {

/// Internal-parallelism cap from COMPACT_CONSERVE_THREADS; unset means serial.
inline int thread_cap() {
    const char* env = std::getenv("COMPACT_CONSERVE_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    if (v < 1) return 1;
    const int hw = int(std::thread::hardware_concurrency());
    return hw > 0 ? std::min(v, hw) : v;
}

/// Runs fn(i) for i in [0, n); splits into contiguous blocks across at most
/// thread_cap() threads. Results must be written to disjoint locations, so
/// the outcome is schedule-independent.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const int cap = thread_cap();
    if (cap <= 1 || n < 2 * cap) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nthreads = std::min(cap, n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        const int lo = int(std::int64_t(n) * t / nthreads);
        const int hi = int(std::int64_t(n) * (t + 1) / nthreads);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Writes content to path via a temp file in the same directory plus rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace ccfd
