#include "qcarpet/util.hpp"

#include <atomic>
#include <cmath>

namespace qcarpet {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int effective_threads() {
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    const int nt = std::min<std::size_t>(effective_threads(), std::max<std::size_t>(n, 1));
    if (nt <= 1 || n < 256) {
        chunk_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn) {
    const int nt = std::min<std::size_t>(effective_threads(), std::max<std::size_t>(n, 1));
    if (nt <= 1 || n < 256) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, fn(i));
        return m;
    }
    const std::size_t chunk = (n + nt - 1) / nt;
    std::vector<double> partial((n + chunk - 1) / chunk, -std::numeric_limits<double>::infinity());
    std::vector<std::thread> pool;
    for (std::size_t c = 0, lo = 0; lo < n; ++c, lo += chunk) {
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, c, lo, hi] {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, fn(i));
            partial[c] = m;
        });
    }
    for (auto& th : pool) th.join();
    // fixed merge order
    double m = -std::numeric_limits<double>::infinity();
    for (double v : partial) m = std::max(m, v);
    return m;
}

} // namespace qcarpet
