#include "nlb/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace nlb {

double exact_sum(std::span<const double> xs) {
    std::vector<double> partials;
    partials.reserve(8);
    for (double x : xs) {
        std::size_t i = 0;
        for (double y : partials) {
            if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials[i++] = lo;
            x = hi;
        }
        partials.resize(i);
        partials.push_back(x);
    }
    if (partials.empty()) return 0.0;
    // Round the expansion to nearest, as in math.fsum.
    std::size_t n = partials.size();
    double hi = partials[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials[--n];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0 && partials[n - 1] < 0) || (lo > 0 && partials[n - 1] > 0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        const double yr = x - hi;
        if (y == yr) hi = x;
    }
    return hi;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    LinearFit f;
    f.n = x.size();
    if (x.empty()) return f;
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / double(x.size());
    const double my = sy.value() / double(x.size());
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        sxx.add(dx * dx);
        sxy.add(dx * (y[i] - my));
    }
    if (sxx.value() > 0) f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    return f;
}

int dyadic_exponent(double x) noexcept {
    x = std::fabs(x);
    if (x == 0.0 || !std::isfinite(x)) return kZeroExponent;
    int e = 0;
    std::frexp(x, &e);  // x = m 2^e, m in [1/2, 1)
    return e - 1;
}

double dyadic(double x) noexcept {
    const int e = dyadic_exponent(x);
    return e == kZeroExponent ? 0.0 : std::ldexp(1.0, e);
}

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int n) { g_threads.store(n < 1 ? 1 : n); }

int num_threads() noexcept {
    int n = g_threads.load();
    if (n < 1) {
        n = int(std::thread::hardware_concurrency());
        if (n < 1) n = 1;
    }
    return n;
}

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (chunk == 0) chunk = 1;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    const std::size_t nt = std::min<std::size_t>(std::size_t(num_threads()), nchunks);
    auto run = [&](std::size_t c) { fn(c, c * chunk, std::min(n, (c + 1) * chunk)); };
    if (nt <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) run(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t c = next++; c < nchunks; c = next++) run(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = nchunks;
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace nlb
