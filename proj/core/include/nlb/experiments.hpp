#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlb/energy_monitor.hpp"
#include "nlb/evolution.hpp"
#include "nlb/thresholds.hpp"

namespace nlb {

// Named initial-data profiles.
//   bump:           amplitude * (exp((cos x - 1) / width^2) - mean)
//   random_sobolev: |u^(k)| = amplitude <k>^{-s - 1/2} for 1 <= |k| <= kmax, random Hermitian phases
//   modes:          explicit list of (k, u^(k)) pairs, conjugates filled in
struct ProfileSpec {
    std::string profile = "random_sobolev";
    double amplitude = 1.0;
    double s = 1.0;
    int kmax = 0;  // 0: the 2/3 dealiasing cutoff of the grid
    double width = 0.5;
    std::vector<std::pair<int, cplx>> modes;
    std::uint64_t seed = 1;
};

SpectralField make_initial(const TorusGrid& g, const ProfileSpec& p);

// T' = A1 (1 + norm)^{-beta1}
double short_time(double norm, double A1, double beta1);

struct TruncationConfig {
    DispersiveSymbol sym = DispersiveSymbol::fkdv(1.0);
    TorusGrid grid{1024};
    ProfileSpec data{};
    double dt = 2.5e-4;
    Scheme scheme = Scheme::etdrk4;
    double s = 0.35;
    std::vector<int> levels{4, 5, 6, 7, 8};
    bool include_full = true;  // pair the last level with all retained modes
    double A1 = 0.1, beta1 = 2.0;
};

struct TruncationRow {
    int m = 0;
    int n = 0;  // -1 for the full reference
    double diff = 0.0;   // sup_{t <= T'} ||u_n - u_m||_{H^s}
    double tail = 0.0;   // ||Pi_{>2^m} u0||_{H^s} (restricted to retained modes)
    double ratio = 0.0;  // diff / tail (0 when both vanish)
};

struct TruncationTable {
    double T_prime = 0.0;
    double u0_norm = 0.0;
    std::vector<TruncationRow> rows;
    double decay_rate = 0.0;    // minus the slope of log2(diff) against m
    double ratio_spread = 0.0;  // max ratio / min ratio over rows with tail > 0
};

TruncationTable run_truncation_study(const TruncationConfig& cfg);

struct LipschitzConfig {
    DispersiveSymbol sym = DispersiveSymbol::fkdv(1.0);
    TorusGrid grid{1024};
    ProfileSpec data{};
    double dt = 2.5e-4;
    Scheme scheme = Scheme::etdrk4;
    double s = 0.35;
    double sigma = -0.2;
    std::vector<double> amplitudes{1e-3, 1e-2, 1e-1};
    int n_seeds = 20;
    int perturb_kmin = 32;   // perturbations live on perturb_kmin <= |k| <= kmax
    double perturb_s = 1.0;  // spectral decay of the perturbation
    std::uint64_t seed = 1;
    double A1 = 0.1, beta1 = 2.0;
    bool enforce_window = true;
};

struct LipschitzRow {
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    double d0 = 0.0;    // ||u0 - v0||_{H-bar^sigma}
    double dmax = 0.0;  // sup_{t <= T'} ||u - v||_{H-bar^sigma}
    double ratio = 0.0;
    bool zero_difference = false;
};

struct LipschitzTable {
    double T_prime = 0.0;
    std::vector<LipschitzRow> rows;
    std::vector<double> max_ratio_per_amplitude;
    double uniformity = 0.0;  // max / min of max_ratio_per_amplitude
};

// Distance in the weighted negative norm: (1/L) sum <k>^{2 sigma} (1 + |k|^{-2}) |w^|^2.
double hbar_norm(const SpectralField& w, double sigma);

LipschitzTable run_lipschitz_study(const LipschitzConfig& cfg);
// One pair with an explicit perturbation (amplitude * p); p must have zero mean.
LipschitzRow lipschitz_pair(const LipschitzConfig& cfg, const SpectralField& u0,
                            const SpectralField& p, double amplitude, double T_prime);

struct ConservationConfig {
    std::vector<DispersiveSymbol> symbols{DispersiveSymbol::fkdv(1.0)};
    std::vector<int> Ks{256};
    std::vector<double> dts{1e-3};
    double T = 1.0;
    ProfileSpec data{};
    Scheme scheme = Scheme::etdrk4;
    bool linear_only = false;
};

struct ConservationRow {
    std::string symbol;
    int K = 0;
    double dt = 0.0;
    double mass_drift = 0.0;  // max_t |M(t) - M(0)| / |M(0)|
    double ham_drift = 0.0;   // same for the hamiltonian with cubic sign +1
    double ham_order = 0.0;   // log2 of the drift ratio against the previous (doubled) dt
};

std::vector<ConservationRow> run_conservation_study(const ConservationConfig& cfg);

struct EnergyStudyConfig {
    DispersiveSymbol sym = DispersiveSymbol::fkdv(1.0);
    TorusGrid grid{1024};
    ProfileSpec data{};
    SolverConfig solver{};
    double s = 1.0;
    std::vector<double> N0s{16, 32, 64, 128, 256};
    std::vector<double> T_list{};  // empty: just solver.T
    int monitor_stride = 1;        // evaluate energies on every stride-th snapshot
};

struct EnergyStudyRow {
    double T = 0.0;
    double N0 = 0.0;
    double drift_energy = 0.0;     // sup_t |E^s(t) - E^s(0)|
    double drift_high = 0.0;       // sup_t |E^s_{>N0}(t) - E^s_{>N0}(0)|
    double drift_quadratic = 0.0;  // sup_t |E_2(t) - E_2(0)|
    double max_gap = 0.0;          // sup_t |E_3| / (3 ||u||_{H^s}^2)
    double energy0 = 0.0;          // E^s(0)
    double high0 = 0.0;            // E^s_{>N0}(0)
};

std::vector<EnergyStudyRow> run_energy_study(const EnergyStudyConfig& cfg);

struct CoercivityStudyConfig {
    DispersiveSymbol sym = DispersiveSymbol::fkdv(1.0);
    TorusGrid grid{256};
    double s = 1.0;              // solution energy regularity
    double sigma = -0.2;         // difference energy index
    double s_z = 0.35;           // regularity of z for the difference window
    std::vector<double> amplitudes{4.0, 40.0};  // drawn log-uniformly in this range
    double data_s = 1.0;         // spectral decay of the random fields
    int n_calibration = 50;
    int n_test = 100;
    std::vector<double> N0s{2, 4, 8, 16, 32, 64};
    std::uint64_t seed = 1;
};

struct CoercivityStudy {
    double C1 = 0.0;                   // calibrated on a separate set
    std::vector<double> N0s;
    std::vector<double> max_gap;       // per N0, max over test fields of lhs / ||.||^2
    int n_test = 0;
    int n_pass = 0;                    // test fields passing at their required N0
    std::vector<double> required_N0;   // per test field
};

CoercivityStudy run_coercivity_study(const CoercivityStudyConfig& cfg);
CoercivityStudy run_difference_coercivity_study(const CoercivityStudyConfig& cfg);

// Precondition checks run by the studies before any computation; InvalidParams on failure.
void validate(const ProfileSpec& p, const TorusGrid& g);
void validate(const TruncationConfig& cfg);
void validate(const LipschitzConfig& cfg);
void validate(const ConservationConfig& cfg);
void validate(const EnergyStudyConfig& cfg);
void validate(const CoercivityStudyConfig& cfg);

// a_{i+1} <= (1 + slack) a_i for consecutive entries, ignoring pairs where
// both sit below abs_floor.
bool non_increasing(const std::vector<double>& v, double slack, double abs_floor = 0.0);

}  // namespace nlb
