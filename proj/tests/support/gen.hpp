#pragma once

// Hand-rolled generators for the property tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "nlb/spectral.hpp"

namespace gen {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
    double sign() { return integer(0, 1) ? 1.0 : -1.0; }

    // |xi| log-uniform in [a, b] with a random sign
    double freq(double a, double b) { return sign() * log_uniform(a, b); }

    // zero-sum quadruple, last entry solved for
    std::array<double, 4> quadruple(double a, double b) {
        const double x = freq(a, b), y = freq(a, b), z = freq(a, b);
        return {x, y, z, -(x + y + z)};
    }

    // Hermitian field on 1 <= |k| <= kmax with |u^(k)| ~ amp <k>^{-decay}
    nlb::SpectralField field(const nlb::TorusGrid& g, int kmax, double amp, double decay) {
        nlb::SpectralField f(g);
        for (int k = 1; k <= kmax; ++k) {
            const double r = amp * std::pow(1.0 + double(k) * k, -decay / 2) * uniform(0.5, 1.5);
            f.set_mode(k, std::polar(r, uniform(0, 2 * std::numbers::pi)));
        }
        return f;
    }
};

}  // namespace gen
