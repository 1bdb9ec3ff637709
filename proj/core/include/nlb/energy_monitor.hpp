#pragma once

#include "nlb/energy_symbols.hpp"
#include "nlb/evolution.hpp"
#include "nlb/spectral.hpp"

namespace nlb {

struct EnergyBreakdown {
    double quadratic = 0.0;
    double quadratic_low = 0.0;   // difference energy: the 0 < |k| < 1 piece
    double quadratic_high = 0.0;  // difference energy: the |k| >= 1 piece
    double cubic = 0.0;
    double coefficient = 0.0;     // 1/3 or 1/2
    double total = 0.0;
    double cubic_imag_rel = 0.0;  // |Im| / sum of |terms| of the triple sum
    double s_or_sigma = 0.0;
    double N0 = 0.0;
};

// Upper limit on K for the O(K^2) triple sums.
inline constexpr int kMaxEnergyK = 4096;

// L^{-2} sum_{k1+k2+k3=0} b3(k1, k2) u^(k1) u^(k2) u^(k3)
double cubic_form(const SpectralField& u, const DispersiveSymbol& sym, double s, double N0,
                  double* imag_rel = nullptr);
// L^{-2} sum b3~(k1, k2) w^(k1) w^(k2) z^(k3)
double cubic_form_tilde(const SpectralField& w, const SpectralField& z,
                        const DispersiveSymbol& sym, double sigma, double N0,
                        double* imag_rel = nullptr);

// E^s = E_2 + E_3 / 3 with E_2 = (||u||^2 + ||D^s u||^2) / 2
EnergyBreakdown modified_energy(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                double N0);
// E^s_{>N0} = ||D^s Pi_{>N0} u||^2 / 2 + E_3 / 3
EnergyBreakdown high_freq_energy(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                 double N0);
// split quadratic / 2 + (cubic tilde form) / 2; w must have zero mean
EnergyBreakdown difference_energy(const SpectralField& w, const SpectralField& z,
                                  const DispersiveSymbol& sym, double sigma, double N0);

struct CoercivityResult {
    double lhs = 0.0;        // |E - ||u||^2 / 2|
    double rhs = 0.0;        // ||u||^2 / 4
    double gap_ratio = 0.0;  // lhs / ||u||^2
    double N0_required = 0.0;
    bool pass = false;
    bool in_hypothesis = true;  // N0 >= N0_required and the regularity window holds
};

// Solution energy against ||u||_{H^s}^2.  N0_required = C1 (1 + ||u||_{H^{s~_alpha}})^{2/alpha};
// s outside (s~_alpha, 3] is evaluated but flagged out of hypothesis.
CoercivityResult coercivity_check(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                  double N0, double C1);
// Difference energy against the split quadratic norm; N0_required = C1 (1 + ||z||_{H^s})^2.
CoercivityResult difference_coercivity_check(const SpectralField& w, const SpectralField& z,
                                             const DispersiveSymbol& sym, double sigma,
                                             double s, double N0, double C1);

inline constexpr double kStrichartzEps = 1e-2;

// (int_0^T ||J^{r} u(t)||_{L^inf}^2 dt)^{1/2}, r = s - (1/2 - alpha/4) - eps, trapezoid in time
double strichartz_norm(const Trajectory& tr, double s, double alpha, double eps = kStrichartzEps);

}  // namespace nlb
