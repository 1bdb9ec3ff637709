#include "nlb/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "nlb/errors.hpp"

namespace nlb {

namespace {

struct Plan {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
};

std::mutex g_plan_mutex;

Plan& get_plan(int n, int sign) {
    static std::map<std::pair<int, int>, Plan> cache;
    const auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Plan p;
    p.in = fftw_alloc_complex(std::size_t(n));
    p.out = fftw_alloc_complex(std::size_t(n));
    p.plan = fftw_plan_dft_1d(n, p.in, p.out, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    return cache.emplace(key, p).first->second;
}

}  // namespace

void dft(std::vector<std::complex<double>>& data, int sign) {
    const int n = int(data.size());
    if (n == 0) return;
    if (sign != 1 && sign != -1) throw InvalidInput("dft sign must be +1 or -1");
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        plan = get_plan(n, sign).plan;
    }
    // new-array execute: buffers must be 16-byte aligned, so go through fftw_malloc
    fftw_complex* in = fftw_alloc_complex(std::size_t(n));
    fftw_complex* out = fftw_alloc_complex(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        in[i][0] = data[i].real();
        in[i][1] = data[i].imag();
    }
    fftw_execute_dft(plan, in, out);
    for (int i = 0; i < n; ++i) data[i] = {out[i][0], out[i][1]};
    fftw_free(in);
    fftw_free(out);
}

}  // namespace nlb
