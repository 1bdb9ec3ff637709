#pragma once

#include <array>

#include "nlb/dispersion.hpp"

namespace nlb {

struct EnergySymbolParams {
    DispersiveSymbol sym;
    double s = 1.0;       // solution energy regularity
    double sigma = -0.25; // difference energy index
    double N0 = 1.0;      // dyadic cutoff
};

// Throws InvalidParams unless N0 is a power of two with N0 >= max(1, xi0).
void validate(const EnergySymbolParams& p);

bool is_power_of_two(double x) noexcept;

// sigma window under which the a4-tilde bounds are stated:
// -1/2 < sigma < min(0, -1/2 + alpha/2).
bool in_a4tilde_window(double alpha, double sigma) noexcept;
// Full difference-energy window: -1/2 + alpha/4 < sigma < min((alpha-1)/2, s - 3/2 + alpha).
bool in_difference_window(double alpha, double s, double sigma) noexcept;

// xi |xi|^{2s} 1_{|xi| >= N0}
double nu_s(double xi, double s, double N0) noexcept;
// xi |xi|^{2 sigma} 1_{|xi| >= 1}
double nu_tilde_sigma(double xi, double sigma) noexcept;

// Relative threshold (against N_min N_max^alpha) below which Omega_3 is treated as zero.
inline constexpr double kResonantThreshold = 1e-12;

double a3(const EnergySymbolParams& p, double xi1, double xi2);
double b3(const EnergySymbolParams& p, double xi1, double xi2);

// Sum over i < j of (xi_i + xi_j) b3(xi_i, xi_j).  The array form takes all
// four frequencies as given and is exactly symmetric under permutations.
double a4(const EnergySymbolParams& p, double xi1, double xi2, double xi3);
double a4(const EnergySymbolParams& p, const std::array<double, 4>& xi);
// Same symbol regrouped as three bracketed differences of b3.
double a4_grouped(const EnergySymbolParams& p, const std::array<double, 4>& xi);

double a3_tilde(const EnergySymbolParams& p, double xi1, double xi2);
double b3_tilde(const EnergySymbolParams& p, double xi1, double xi2);

struct A4TildeParts {
    double total = 0, a41 = 0, a42 = 0, a43 = 0;
};

A4TildeParts a4_tilde(const EnergySymbolParams& p, double xi1, double xi2, double xi3);

// (xi1 + xi2) b3_tilde(xi1, xi2)
double a44_tilde(const EnergySymbolParams& p, double xi1, double xi2);

// xi3 nu_tilde(xi3) / (xi1 omega'(xi3)), the leading term removed in the
// refined C3 bound.
double c3_leading_term(const EnergySymbolParams& p, double xi1, double xi3);

}  // namespace nlb
