#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlb {

enum class SymbolKind { fkdv, whitham, ilw, smith, custom };

std::string to_string(SymbolKind k);

// Real odd dispersion law omega_{alpha+1} with derivatives up to order 3.
// Immutable after construction.
class DispersiveSymbol {
public:
    // evaluator(xi, order) must return d^order omega / dxi^order at xi.
    using Evaluator = std::function<double(double, int)>;

    static DispersiveSymbol fkdv(double alpha, double xi0 = 1.0);
    static DispersiveSymbol whitham(double tau, double xi0 = 1.0);
    static DispersiveSymbol ilw(double delta, double xi0 = 1.0);
    static DispersiveSymbol smith(double xi0 = 1.0);
    static DispersiveSymbol custom(double alpha, double xi0, Evaluator ev);

    double operator()(double xi, int order = 0) const;

    SymbolKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double xi0() const noexcept { return xi0_; }
    // tau for whitham, delta for ilw, 0 otherwise.
    double param() const noexcept { return param_; }
    std::string name() const;

private:
    DispersiveSymbol(SymbolKind k, double alpha, double xi0, double param, Evaluator ev);

    SymbolKind kind_;
    double alpha_;
    double xi0_;
    double param_;
    Evaluator custom_;
};

double omega(const DispersiveSymbol& sym, double xi, int order = 0);

// Degree-6 series are used below this |xi| for the whitham and ilw symbols.
inline constexpr double kSeriesThreshold = 1e-3;

struct HypothesisRow {
    int order = 0;
    double inf_ratio = 0.0;
    double sup_ratio = 0.0;
    double trend_slope = 0.0;
    bool two_sided = true;  // false: only the upper bound is checked
    bool pass = false;
};

struct HypothesisReport {
    double xi_lo = 0.0, xi_hi = 0.0;
    int n_samples = 0;
    std::array<HypothesisRow, 4> rows{};
    bool pass = false;
};

inline constexpr double kTrendTolerance = 0.05;

// Samples |d^b omega(xi)| / |xi|^{alpha+1-b} on a log-uniform grid of
// [xi_lo, xi_hi].  For alpha = 1 the third derivative of the model symbols
// vanishes or decays, so that row is checked as an upper bound only.
HypothesisReport check_hypothesis1(const DispersiveSymbol& sym, double xi_lo, double xi_hi,
                                   int n_samples);

// Relative tolerance for the zero-sum constraint.
inline constexpr double kHyperplaneTolerance = 1e-12;

bool on_hyperplane(std::span<const double> freqs) noexcept;

// Omega_n = sum_i omega(xi_i) on the zero-sum hyperplane, n in {3, 4}.
double resonance(const DispersiveSymbol& sym, std::span<const double> freqs);

enum class Region { A, B1, B2, C1, C2, C3, C4, LOW, OTHER };

std::string to_string(Region r);
Region region_from_string(const std::string& s);

// Dyadic comparison rules: a ~ b iff a/b in [1/8, 8]; a << b iff a/b < 1/8.
struct DyadicRules {
    double sim_ratio = 8.0;
    // "N_max >> xi0" means N_max >= high_factor * xi0.
    double high_factor = 64.0;
};

bool dyadic_sim(double a, double b, const DyadicRules& r = {}) noexcept;
bool dyadic_ll(double a, double b, const DyadicRules& r = {}) noexcept;

// Comparators are built from dyadic magnitudes by default; raw magnitudes
// (|xi_i| themselves) are kept alongside for direct arithmetic checks.
enum class Magnitudes { dyadic, raw };

struct MagnitudeSet {
    std::array<double, 4> N{};  // |xi_i|
    std::array<double, 3> M{};  // |xi2+xi3|, |xi1+xi3|, |xi1+xi2|
    double N_min = 0, N_thd = 0, N_sub = 0, N_max = 0;
    double M_min = 0, M_med = 0, M_max = 0;
    double omega_comparator = 0;  // M_min M_med N_max^{alpha-1}
};

struct RegionLabel {
    Region tag = Region::OTHER;
    std::array<double, 4> xi{};  // sorted so |xi1| <= |xi2| and |xi3| <= |xi4|
    MagnitudeSet dyadic;
    MagnitudeSet raw;
    const MagnitudeSet& magnitudes(Magnitudes m) const noexcept {
        return m == Magnitudes::raw ? raw : dyadic;
    }
};

RegionLabel classify_region(const std::array<double, 4>& xi, const DispersiveSymbol& sym,
                            const DyadicRules& rules = {});

// Integer triples with |k_i| <= kmax and (k1+k2)(k1+k3)(k2+k3) = 0.
std::vector<std::array<int, 3>> torus_resonant_set(int kmax);

}  // namespace nlb
