#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nlb/dispersion.hpp"
#include "nlb/energy_symbols.hpp"

namespace nlb {

struct Violation {
    std::vector<double> xi;
    double ratio = 0.0;
};

struct BoundReport {
    std::string estimate_id;
    std::string region;  // region tag, "sim"/"ll" for triples, or "global"
    std::size_t n_samples = 0;
    double inf_ratio = 0.0;
    double sup_ratio = 0.0;
    double trend_slope = 0.0;
    bool two_sided = false;
    bool pass = false;
    std::vector<Violation> violations;  // worst ratios first, at most kMaxViolations
};

inline constexpr std::size_t kMaxViolations = 32;
inline constexpr double kBoundTrendTolerance = 0.05;

struct SamplerArgs {
    std::string region = "global";
    std::size_t n = 10000;
    double N_lo = 65536.0;       // 2^16
    double N_hi = 1073741824.0;  // 2^30
    std::uint64_t seed = 1;
    DyadicRules rules{};
};

inline constexpr std::size_t kMaxRejections = 1000000;

// Quadruples on the zero-sum hyperplane whose classify_region tag equals
// region ("A".."C4") or any non-LOW tag for "global".  The dyadic N_max of
// every tuple is a power of two 2^E with E uniform over the integers in
// [log2 N_lo, log2 N_hi].  Deterministic in seed.
std::vector<std::array<double, 4>> sample_tuples(const DispersiveSymbol& sym,
                                                 const SamplerArgs& args);

// Triples on the zero-sum hyperplane; region "sim" (N1 ~ N2), "ll" (N1 << N2
// or N2 << N1) or "global".
std::vector<std::array<double, 3>> sample_triples(const DispersiveSymbol& sym,
                                                  const SamplerArgs& args);

enum class Quantity { omega3, omega4 };

BoundReport verify_two_sided(const DispersiveSymbol& sym, Quantity q, const SamplerArgs& args);
BoundReport verify_omega3(const DispersiveSymbol& sym,
                          const std::vector<std::array<double, 3>>& triples,
                          const DyadicRules& rules = {});
BoundReport verify_omega4(const DispersiveSymbol& sym,
                          const std::vector<std::array<double, 4>>& tuples,
                          const DyadicRules& rules = {});

struct EstimateInfo {
    std::string id;
    std::string sampler_region;  // default sampler region
    bool on_triples;             // samples Gamma^3 rather than Gamma^4
    std::string quantity;
    std::string comparator;
};

const std::vector<EstimateInfo>& estimate_table();
const EstimateInfo& estimate_info(const std::string& id);

struct OneSidedOptions {
    // When false, parameters outside the stated hypothesis are evaluated
    // anyway instead of raising InvalidParams (diagnostic use only).
    bool enforce_hypothesis = true;
};

// Throws InvalidInput for an unknown id and InvalidParams when (s, sigma, alpha)
// fall outside the estimate's stated parameter range.
void check_estimate_hypothesis(const EnergySymbolParams& p, const std::string& estimate_id);

// args.region may be left as "default" (or empty) to use the estimate's own region.
BoundReport verify_one_sided(const EnergySymbolParams& p, const std::string& estimate_id,
                             SamplerArgs args, const OneSidedOptions& opt = {});
// Same estimate on explicit tuples (Gamma^3 estimates use the first two entries).
BoundReport verify_one_sided_tuples(const EnergySymbolParams& p, const std::string& estimate_id,
                                    const std::vector<std::array<double, 4>>& tuples,
                                    const OneSidedOptions& opt = {},
                                    const DyadicRules& rules = {});

// Short-time exponential sum S(t, x) = |sum_{N/2 <= |k| <= 2N} e^{i(t omega(k) + k x)}|
// on a log grid of n_t times in (0, N^{-alpha}] and n_x equispaced x.
struct ExpSumPoint {
    double N = 0;
    std::size_t n_modes = 0;
    double sup_scaled = 0;  // sup over (t, x) of S t^{1/2} N^{(alpha-1)/2}
    double t_at_sup = 0;
};

ExpSumPoint exp_sum_point(const DispersiveSymbol& sym, int N, int n_t, int n_x);
// S(t, x) on the n_x grid, via one FFT of length n_x with modes folded mod n_x.
std::vector<double> exp_sum_profile(const DispersiveSymbol& sym, int N, double t, int n_x);

// One point per N in Ns; ratio = sup_scaled, trend over log N (one-sided).
BoundReport verify_exp_sum(const DispersiveSymbol& sym, const std::vector<int>& Ns, int n_t,
                           int n_x);
BoundReport verify_exp_sum(const DispersiveSymbol& sym, int N, int n_t, int n_x);

}  // namespace nlb
