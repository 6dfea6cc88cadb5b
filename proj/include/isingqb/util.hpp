// util.hpp — deterministic chunked parallel-for and a stderr logger.

#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace isingqb {

// Worker count: ISINGQB_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("ISINGQB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Runs fn(i) for i in [0, n). Work is handed out in fixed-size chunks; any
// reduction must be done by the caller over per-index slots (or per-chunk
// buffers combined in index order) so results do not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t chunk = 16) {
    if (n == 0) return;
    const unsigned workers = std::min<std::size_t>(worker_count(), (n + chunk - 1) / chunk);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(begin + chunk, n);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("ISINGQB_LOG");
        if (!env) return LogLevel::info;
        const std::string v(env);
        if (v == "quiet" || v == "0") return LogLevel::quiet;
        if (v == "debug" || v == "2") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

template <class... Args>
void log_info(const char* fmt, Args... args) {
    if (log_level() >= LogLevel::info) {
        std::fprintf(stderr, "[isingqb] ");
        if constexpr (sizeof...(Args) == 0) {
            std::fprintf(stderr, "%s", fmt);
        } else {
            std::fprintf(stderr, fmt, args...);
        }
        std::fprintf(stderr, "\n");
    }
}

template <class... Args>
void log_debug(const char* fmt, Args... args) {
    if (log_level() >= LogLevel::debug) {
        std::fprintf(stderr, "[isingqb:debug] ");
        if constexpr (sizeof...(Args) == 0) {
            std::fprintf(stderr, "%s", fmt);
        } else {
            std::fprintf(stderr, fmt, args...);
        }
        std::fprintf(stderr, "\n");
    }
}

}  // namespace isingqb
