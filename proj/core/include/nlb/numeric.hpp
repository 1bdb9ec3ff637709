#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlb {

// Correctly rounded sum of a finite list (Shewchuk partials). Invariant
// under permutation and exactly odd under negation of all inputs.
double exact_sum(std::span<const double> xs);

// Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) noexcept {
        const double t = sum + x;
        if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    void add(const CompensatedSum& o) noexcept {
        add(o.sum);
        add(o.comp);
    }
    double value() const noexcept { return sum + comp; }
};

struct CompensatedComplexSum {
    CompensatedSum re, im;
    void add(std::complex<double> z) noexcept {
        re.add(z.real());
        im.add(z.imag());
    }
    void add(const CompensatedComplexSum& o) noexcept {
        re.add(o.re);
        im.add(o.im);
    }
    std::complex<double> value() const noexcept { return {re.value(), im.value()}; }
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares y ~ a + b x.  Returns slope 0 when x has no spread.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Dyadic magnitude: the power of two 2^e with 2^e <= |x| < 2^{e+1}.
// Zero maps to exponent kZeroExponent and magnitude 0.
inline constexpr int kZeroExponent = -100000;
int dyadic_exponent(double x) noexcept;
double dyadic(double x) noexcept;

// Worker count used by the data-parallel loops.  Work is split in a fixed
// chunk layout independent of the count, so results do not depend on it.
void set_num_threads(int n);
int num_threads() noexcept;

// Calls fn(chunk_index, begin, end) for every chunk of [0, n) of size chunk.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace nlb
