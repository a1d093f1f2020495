#include "phasespace/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace phasespace {

int thread_count() {
    static int cached = [] {
        if (const char* env = std::getenv("PHASESPACE_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? static_cast<int>(hw) : 1;
    }();
    return cached;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t, int)>& fn) {
    int workers = thread_count();
    if (workers > static_cast<int>(n)) workers = n ? static_cast<int>(n) : 1;
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        size_t b = std::min(n, w * chunk);
        size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e, w] { fn(b, e, w); });
    }
    fn(0, std::min(n, chunk), 0);
    for (auto& t : pool) t.join();
}

}  // namespace phasespace
