#pragma once

#include <string>
#include <vector>

#include "nlb/spectral.hpp"

namespace nlb {

enum class Scheme { etdrk4, lawson_rk4 };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverConfig {
    double dt = 1e-3;
    double T = 1.0;
    Scheme scheme = Scheme::etdrk4;
    double dealias_fraction = kDefaultDealias;
    int snapshot_stride = 1;  // keep every stride-th step (the final state is always kept)
    bool linear_only = false; // drop the nonlinearity (test hook)
    int cubic_sign = +1;      // sign used by the hamiltonian monitor
    std::vector<double> norm_s;  // H^s norms recorded per step
};

inline constexpr double kLawsonGuard = 50.0;

// Throws InvalidParams on dt <= 0, dt > T, bad stride, or a Lawson step with
// dt max|omega(k)| over retained modes above kLawsonGuard.
void validate(const SolverConfig& cfg, const DispersiveSymbol& sym, const TorusGrid& g);

// Spectral representation of d/dx (u^2), dealiased with the given rule.
SpectralField nonlinearity(const SpectralField& f, double dealias_fraction = kDefaultDealias);

struct Invariants {
    double mass = 0.0;         // int u^2
    double hamiltonian = 0.0;  // 1/2 int u (omega(D)/D) u + cubic_sign/3 int u^3
    double quadratic = 0.0;
    double cubic = 0.0;        // int u^3
};

// int u^3 evaluated exactly for the band-limited field on a zero-padded 2K grid.
double cubic_integral(const SpectralField& f);
Invariants invariants(const SpectralField& f, const DispersiveSymbol& sym, int cubic_sign = +1);

// Per-mode exponential coefficients for a fixed step size.
class Stepper {
public:
    Stepper(const DispersiveSymbol& sym, const TorusGrid& g, double dt, Scheme scheme,
            double dealias_fraction = kDefaultDealias, bool linear_only = false);
    SpectralField step(const SpectralField& u) const;
    double dt() const noexcept { return dt_; }

private:
    SpectralField N(const SpectralField& u) const;

    TorusGrid grid_;
    double dt_;
    Scheme scheme_;
    double frac_;
    bool linear_only_;
    std::vector<cplx> E_, E2_, Q_, f1_, f2_, f3_;
};

// Single step; throws NonFiniteState (time 0) if the result is not finite.
SpectralField step(const SpectralField& u, const DispersiveSymbol& sym, double dt, Scheme scheme,
                   double dealias_fraction = kDefaultDealias);

struct Trajectory {
    std::vector<double> times;           // snapshot times
    std::vector<SpectralField> fields;   // snapshots
    std::vector<double> monitor_times;   // every step, including t = 0
    std::vector<double> mass, hamiltonian, mean_re;
    std::vector<std::vector<double>> norms;  // norms[i][n] for cfg.norm_s[i]
};

// Runs with step T / ceil(T / dt); throws NonFiniteState carrying the failure time.
Trajectory simulate(const SpectralField& u0, const DispersiveSymbol& sym, const SolverConfig& cfg);

// phi_1..phi_3 of a complex argument; Taylor series for |z| < 1/2.
cplx phi1(cplx z);
cplx phi2(cplx z);
cplx phi3(cplx z);

}  // namespace nlb
