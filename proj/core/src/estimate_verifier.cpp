#include "nlb/estimate_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>

#include "nlb/errors.hpp"
#include "nlb/fft.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

namespace {

constexpr std::size_t kSampleChunk = 256;

struct Rng {
    std::mt19937_64 g;
    double uni() { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }
    double sign() { return (g() >> 63) ? -1.0 : 1.0; }
    // random sign, uniform in the dyadic shell [2^e, 2^{e+1}); shells are kept at e >= 0
    double shell(int e) { return sign() * std::ldexp(1.0 + uni(), std::max(e, 0)); }
};

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk) {
    std::seed_seq sq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(chunk),
                     std::uint32_t(std::uint64_t(chunk) >> 32), 0x6e6c62u};
    return std::mt19937_64(sq);
}

std::pair<int, int> exponent_range(const DispersiveSymbol& sym, const SamplerArgs& a) {
    if (a.n == 0) throw InvalidInput("sample count must be positive");
    if (!(a.N_lo <= a.N_hi)) throw InvalidRange("N_range must be ordered");
    if (a.N_lo < 64.0 * sym.xi0() * (1 - 1e-12)) throw InvalidRange("N_range below 2^6 xi0");
    if (a.N_hi > std::ldexp(1.0, 30) * (1 + 1e-12)) throw InvalidRange("N_range above 2^30");
    const int lo = int(std::ceil(std::log2(a.N_lo) - 1e-12));
    const int hi = int(std::floor(std::log2(a.N_hi) + 1e-12));
    if (lo > hi) throw InvalidRange("N_range contains no power of two");
    return {lo, hi};
}

template <std::size_t n>
void rescale(std::array<double, n>& x, int E) {
    int em = kZeroExponent;
    for (double v : x) em = std::max(em, dyadic_exponent(v));
    if (em == kZeroExponent) return;
    for (double& v : x) v = std::ldexp(v, E - em);
}

// Draws a candidate for the given region at top exponent E (before rescaling).
std::array<double, 4> candidate(Region r, int E, Rng& rng) {
    auto big = [&] { return rng.shell(E - rng.integer(0, 2)); };
    std::array<double, 4> x{};
    switch (r) {
        case Region::A:
            x = {big(), big(), big(), 0.0};
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        case Region::B1:
            x = {rng.shell(E - rng.integer(4, 10)), big(), big(), 0.0};
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        case Region::B2:
            x = {big(), big(), rng.shell(E - rng.integer(4, 10)), 0.0};
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        case Region::C1: {
            const int e4 = E - rng.integer(4, 10);
            x[3] = rng.shell(e4);
            x[2] = rng.shell(e4 - rng.integer(0, 6));
            x[0] = big();
            x[1] = -(x[0] + x[2] + x[3]);
            break;
        }
        case Region::C2: {
            const int e2 = E - rng.integer(4, 10);
            x[1] = rng.shell(e2);
            x[0] = rng.shell(e2 - rng.integer(0, 6));
            x[2] = big();
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        }
        case Region::C3: {
            const int e3 = E - rng.integer(4, 7);
            x[2] = rng.shell(e3);
            x[0] = rng.shell(e3 - rng.integer(4, 7));
            x[1] = big();
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        }
        case Region::C4: {
            const int e1 = E - rng.integer(4, 10);
            x[0] = rng.shell(e1);
            x[2] = rng.shell(e1 - rng.integer(-2, 6));
            x[1] = big();
            x[3] = -(x[0] + x[1] + x[2]);
            break;
        }
        default:
            throw InvalidInput("no sampler for region " + to_string(r));
    }
    return x;
}

constexpr std::array<Region, 7> kSampledRegions{Region::A,  Region::B1, Region::B2, Region::C1,
                                                Region::C2, Region::C3, Region::C4};

template <class T, class Fill>
std::vector<T> chunked_sample(std::size_t n, std::uint64_t seed, Fill fill) {
    std::vector<T> out(n);
    parallel_chunks(n, kSampleChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
        Rng rng{chunk_rng(seed, c)};
        for (std::size_t i = b; i < e; ++i) out[i] = fill(rng);
    });
    return out;
}

double log_or_nan(double x) { return x > 0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN(); }

struct Sample {
    double ratio;
    double log_n;
    std::vector<double> xi;
};

BoundReport build_report(std::string id, std::string region, bool two_sided,
                         const std::vector<Sample>& s) {
    if (s.empty()) throw InvalidInput("empty sample set");
    BoundReport r;
    r.estimate_id = std::move(id);
    r.region = std::move(region);
    r.two_sided = two_sided;
    r.n_samples = s.size();
    r.inf_ratio = std::numeric_limits<double>::infinity();
    r.sup_ratio = 0.0;
    bool bad = false;
    std::vector<double> lx, ly;
    for (const auto& v : s) {
        if (std::isnan(v.ratio)) {
            bad = true;
            r.sup_ratio = std::numeric_limits<double>::infinity();
            continue;
        }
        r.inf_ratio = std::min(r.inf_ratio, v.ratio);
        r.sup_ratio = std::max(r.sup_ratio, v.ratio);
        if (v.ratio > 0 && std::isfinite(v.ratio) && std::isfinite(v.log_n)) {
            lx.push_back(v.log_n);
            ly.push_back(std::log(v.ratio));
        }
    }
    if (!std::isfinite(r.inf_ratio)) r.inf_ratio = 0.0;
    r.trend_slope = lx.size() >= 2 ? fit_line(lx, ly).slope : 0.0;
    const bool finite = !bad && std::isfinite(r.sup_ratio);
    if (two_sided)
        r.pass = finite && r.inf_ratio > 0 && std::fabs(r.trend_slope) <= kBoundTrendTolerance;
    else
        r.pass = finite && r.trend_slope <= kBoundTrendTolerance;

    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    auto key = [&](std::size_t i) {
        return std::isnan(s[i].ratio) ? std::numeric_limits<double>::infinity() : s[i].ratio;
    };
    const std::size_t k = std::min(kMaxViolations, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + std::ptrdiff_t(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double ka = key(a), kb = key(b);
                          return ka != kb ? ka > kb : a < b;
                      });
    for (std::size_t i = 0; i < k; ++i) r.violations.push_back({s[idx[i]].xi, s[idx[i]].ratio});
    return r;
}

template <class T, class Eval>
std::vector<Sample> evaluate(const std::vector<T>& xs, Eval ev) {
    std::vector<Sample> out(xs.size());
    parallel_chunks(xs.size(), kSampleChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = ev(xs[i]);
    });
    return out;
}

double ratio_of(double q, double c) {
    if (c > 0) return std::fabs(q) / c;
    return q == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<std::array<double, 4>> sample_tuples(const DispersiveSymbol& sym,
                                                 const SamplerArgs& args) {
    const auto [elo, ehi] = exponent_range(sym, args);
    const bool global = args.region == "global";
    const Region want = global ? Region::OTHER : region_from_string(args.region);
    if (!global && (want == Region::LOW || want == Region::OTHER))
        throw InvalidInput("cannot sample region " + args.region);
    return chunked_sample<std::array<double, 4>>(args.n, args.seed, [&](Rng& rng) {
        for (std::size_t tries = 0; tries < kMaxRejections; ++tries) {
            const Region r = global ? kSampledRegions[std::size_t(rng.integer(0, 6))] : want;
            const int E = rng.integer(elo, ehi);
            auto x = candidate(r, E, rng);
            rescale(x, E);
            const Region got = classify_region(x, sym, args.rules).tag;
            if (global ? got != Region::LOW : got == want) return x;
        }
        throw RegionUnsatisfiable("no tuple found for region " + args.region);
    });
}

std::vector<std::array<double, 3>> sample_triples(const DispersiveSymbol& sym,
                                                  const SamplerArgs& args) {
    const auto [elo, ehi] = exponent_range(sym, args);
    const std::string& reg = args.region;
    if (reg != "sim" && reg != "ll" && reg != "global")
        throw InvalidInput("triple region must be sim, ll or global");
    return chunked_sample<std::array<double, 3>>(args.n, args.seed, [&](Rng& rng) {
        for (std::size_t tries = 0; tries < kMaxRejections; ++tries) {
            const bool sim = reg == "sim" || (reg == "global" && rng.integer(0, 1) == 0);
            const int E = rng.integer(elo, ehi);
            std::array<double, 3> x{};
            x[0] = rng.shell(E);
            x[1] = rng.shell(E - (sim ? rng.integer(0, 3) : rng.integer(4, 13)));
            if (!sim && rng.integer(0, 1)) std::swap(x[0], x[1]);
            x[2] = -(x[0] + x[1]);
            rescale(x, E);
            const double n1 = dyadic(x[0]), n2 = dyadic(x[1]);
            const bool ok = sim ? dyadic_sim(n1, n2, args.rules)
                                : (dyadic_ll(n1, n2, args.rules) || dyadic_ll(n2, n1, args.rules));
            if (ok) return x;
        }
        throw RegionUnsatisfiable("no triple found for region " + reg);
    });
}

BoundReport verify_omega3(const DispersiveSymbol& sym,
                          const std::vector<std::array<double, 3>>& triples, const DyadicRules&) {
    auto s = evaluate(triples, [&](const std::array<double, 3>& x) {
        const double n[3] = {dyadic(x[0]), dyadic(x[1]), dyadic(x[2])};
        const double nmin = std::min({n[0], n[1], n[2]});
        const double nmax = std::max({n[0], n[1], n[2]});
        const double q = resonance(sym, x);
        return Sample{ratio_of(q, nmin * std::pow(nmax, sym.alpha())), log_or_nan(nmax),
                      {x.begin(), x.end()}};
    });
    return build_report("omega3", "given", true, s);
}

BoundReport verify_omega4(const DispersiveSymbol& sym,
                          const std::vector<std::array<double, 4>>& tuples,
                          const DyadicRules& rules) {
    auto s = evaluate(tuples, [&](const std::array<double, 4>& x) {
        const auto lab = classify_region(x, sym, rules);
        const double q = resonance(sym, x);
        return Sample{ratio_of(q, lab.dyadic.omega_comparator), log_or_nan(lab.dyadic.N_max),
                      {x.begin(), x.end()}};
    });
    return build_report("omega4", "given", true, s);
}

BoundReport verify_two_sided(const DispersiveSymbol& sym, Quantity q, const SamplerArgs& args) {
    BoundReport r;
    if (q == Quantity::omega3) {
        r = verify_omega3(sym, sample_triples(sym, args), args.rules);
    } else {
        r = verify_omega4(sym, sample_tuples(sym, args), args.rules);
    }
    r.region = args.region;
    return r;
}

const std::vector<EstimateInfo>& estimate_table() {
    static const std::vector<EstimateInfo> t = {
        {"est-a4", "global", false, "|a4|", "M_min M_med max(N_thd, N_max)^{2s-alpha} N_max^{-1}"},
        {"b3tilde-1", "sim", true, "|b3~(xi1, xi2)|", "N_max^{2 sigma - alpha}"},
        {"b3tilde-2", "ll", true, "|b3~(xi1, xi2)|", "N_min^{-1} N_max^{2 sigma + 1 - alpha}"},
        {"a4tilde-A", "A", false, "|a4~|", "N_max^{2 sigma + 1 - alpha}"},
        {"a4tilde-B1", "B1", false, "|a4~|", "N_1^{-1} N_max^{2 sigma + 2 - alpha}"},
        {"a4tilde-B2", "B2", false, "|a4~|", "N_max^{2 sigma + 1 - alpha}"},
        {"a4tilde-C1", "C1", false, "|a4~|", "N_4 N_max^{2 sigma - alpha}"},
        {"a4tilde-C2", "C2", false, "|a4~|", "N_1^{-1} N_max^{2 sigma + 2 - alpha}"},
        {"a4tilde-C3-rough", "C3", false, "|a4~|", "N_1^{-1} N_3^{2 sigma + 2 - alpha}"},
        {"a4tilde-C3-refined", "C3", false,
         "|a4~ + xi3 nu~(xi3) / (xi1 omega'(xi3))|",
         "N_1^{2 sigma} N_3^{1 - alpha} + N_1^{-1} N_3 N_max^{2 sigma + 1 - alpha}"},
        {"a4tilde-C4", "C4", false, "|a4~|", "N_1^{2 sigma + 1 - alpha}"},
        {"a44tilde", "global", false, "|(xi1 + xi2) b3~(xi1, xi2)|",
         "N_min^{-1} N_max^{2 sigma + 2 - alpha}"},
    };
    return t;
}

const EstimateInfo& estimate_info(const std::string& id) {
    for (const auto& e : estimate_table())
        if (e.id == id) return e;
    throw InvalidInput("unknown estimate_id: " + id);
}

namespace {

void check_hypothesis(const EnergySymbolParams& p, const std::string& id) {
    const double a = p.sym.alpha();
    if (id == "est-a4") {
        if (!(p.s > 0)) throw InvalidParams("est-a4 needs s > 0");
        return;
    }
    if (id.rfind("a4tilde", 0) == 0) {
        if (!in_a4tilde_window(a, p.sigma))
            throw InvalidParams("sigma = " + std::to_string(p.sigma) +
                                " outside (-1/2, min(0, -1/2 + alpha/2)) required by " + id);
        return;
    }
    if (!(p.sigma > -0.5 && p.sigma < 0))
        throw InvalidParams("sigma must lie in (-1/2, 0) for " + id);
}

Sample eval_one(const EnergySymbolParams& p, const std::string& id,
                const std::array<double, 4>& in, const DyadicRules& rules) {
    const double a = p.sym.alpha(), sg = p.sigma;
    if (id == "b3tilde-1" || id == "b3tilde-2") {
        const std::array<double, 3> x{in[0], in[1], -(in[0] + in[1])};
        const double n[3] = {dyadic(x[0]), dyadic(x[1]), dyadic(x[2])};
        const double nmin = std::min({n[0], n[1], n[2]});
        const double nmax = std::max({n[0], n[1], n[2]});
        const double q = b3_tilde(p, x[0], x[1]);
        const double c = id == "b3tilde-1" ? std::pow(nmax, 2 * sg - a)
                                           : std::pow(nmax, 2 * sg + 1 - a) / nmin;
        return {ratio_of(q, c), log_or_nan(nmax), {x.begin(), x.end()}};
    }
    const auto lab = classify_region(in, p.sym, rules);
    const auto& m = lab.dyadic;
    const auto& x = lab.xi;
    const double N1 = m.N[0], N3 = m.N[2], N4 = m.N[3], Nmax = m.N_max;
    double q = 0, c = 0;
    if (id == "est-a4") {
        q = a4(p, x);
        const double e = 2 * p.s - a;
        c = m.M_min * m.M_med * std::max(std::pow(m.N_thd, e), std::pow(Nmax, e)) / Nmax;
    } else if (id == "a44tilde") {
        q = a44_tilde(p, x[0], x[1]);
        c = std::pow(Nmax, 2 * sg + 2 - a) / m.N_min;
    } else {
        const auto t = a4_tilde(p, x[0], x[1], x[2]);
        q = t.total;
        if (id == "a4tilde-A" || id == "a4tilde-B2")
            c = std::pow(Nmax, 2 * sg + 1 - a);
        else if (id == "a4tilde-B1" || id == "a4tilde-C2")
            c = std::pow(Nmax, 2 * sg + 2 - a) / N1;
        else if (id == "a4tilde-C1")
            c = N4 * std::pow(Nmax, 2 * sg - a);
        else if (id == "a4tilde-C3-rough")
            c = std::pow(N3, 2 * sg + 2 - a) / N1;
        else if (id == "a4tilde-C3-refined") {
            q = t.total + c3_leading_term(p, x[0], x[2]);
            c = std::pow(N1, 2 * sg) * std::pow(N3, 1 - a) +
                N3 * std::pow(Nmax, 2 * sg + 1 - a) / N1;
        } else if (id == "a4tilde-C4")
            c = std::pow(N1, 2 * sg + 1 - a);
        else
            throw InvalidInput("unknown estimate_id: " + id);
    }
    return {ratio_of(q, c), log_or_nan(Nmax), {x.begin(), x.end()}};
}

}  // namespace

BoundReport verify_one_sided_tuples(const EnergySymbolParams& p, const std::string& id,
                                    const std::vector<std::array<double, 4>>& tuples,
                                    const OneSidedOptions& opt, const DyadicRules& rules) {
    const auto& info = estimate_info(id);
    validate(p);
    if (opt.enforce_hypothesis) check_hypothesis(p, id);
    auto s = evaluate(tuples, [&](const std::array<double, 4>& x) { return eval_one(p, id, x, rules); });
    return build_report(id, info.sampler_region, false, s);
}

BoundReport verify_one_sided(const EnergySymbolParams& p, const std::string& id, SamplerArgs args,
                             const OneSidedOptions& opt) {
    const auto& info = estimate_info(id);
    validate(p);
    if (opt.enforce_hypothesis) check_hypothesis(p, id);
    if (args.region.empty() || args.region == "default") args.region = info.sampler_region;
    std::vector<std::array<double, 4>> tuples;
    if (info.on_triples) {
        for (const auto& t : sample_triples(p.sym, args)) tuples.push_back({t[0], t[1], t[2], 0.0});
    } else {
        tuples = sample_tuples(p.sym, args);
    }
    auto r = verify_one_sided_tuples(p, id, tuples, opt, args.rules);
    r.region = args.region;
    return r;
}

std::vector<double> exp_sum_profile(const DispersiveSymbol& sym, int N, double t, int n_x) {
    if (n_x < 1) throw InvalidInput("n_x must be positive");
    std::vector<std::complex<double>> c(std::size_t(n_x), {0.0, 0.0});
    const int lo = (N + 1) / 2;
    for (int k = lo; k <= 2 * N; ++k)
        for (int k2 : {k, -k}) {
            const double ph = t * sym(double(k2));
            const int j = ((k2 % n_x) + n_x) % n_x;
            c[std::size_t(j)] += std::polar(1.0, ph);
        }
    dft(c, +1);
    std::vector<double> s(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) s[i] = std::abs(c[i]);
    return s;
}

ExpSumPoint exp_sum_point(const DispersiveSymbol& sym, int N, int n_t, int n_x) {
    if (N < 64.0 * sym.xi0()) throw InvalidRange("N must be at least 2^6 xi0");
    if (n_t < 1 || n_x < 1) throw InvalidInput("n_t and n_x must be positive");
    const double a = sym.alpha();
    const double tmax = std::pow(double(N), -a);
    const double tmin = tmax / (16.0 * N);
    std::vector<double> tv(static_cast<std::size_t>(n_t));
    for (int i = 0; i < n_t; ++i)
        tv[std::size_t(i)] =
            n_t == 1 ? tmax : tmin * std::pow(tmax / tmin, double(i) / double(n_t - 1));
    std::vector<double> best(tv.size());
    parallel_chunks(tv.size(), 1, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto s = exp_sum_profile(sym, N, tv[i], n_x);
            best[i] = *std::max_element(s.begin(), s.end()) * std::sqrt(tv[i]) *
                      std::pow(double(N), 0.5 * (a - 1.0));
        }
    });
    ExpSumPoint p;
    p.N = N;
    p.n_modes = std::size_t(2 * (2 * N - (N + 1) / 2 + 1));
    for (std::size_t i = 0; i < tv.size(); ++i)
        if (best[i] > p.sup_scaled) {
            p.sup_scaled = best[i];
            p.t_at_sup = tv[i];
        }
    return p;
}

BoundReport verify_exp_sum(const DispersiveSymbol& sym, const std::vector<int>& Ns, int n_t,
                           int n_x) {
    std::vector<Sample> s;
    for (int N : Ns) {
        const auto p = exp_sum_point(sym, N, n_t, n_x);
        s.push_back({p.sup_scaled, std::log(double(N)), {double(N), p.t_at_sup}});
    }
    auto r = build_report("exp-sum", "global", false, s);
    return r;
}

BoundReport verify_exp_sum(const DispersiveSymbol& sym, int N, int n_t, int n_x) {
    return verify_exp_sum(sym, std::vector<int>{N}, n_t, n_x);
}

void check_estimate_hypothesis(const EnergySymbolParams& p, const std::string& estimate_id) {
    estimate_info(estimate_id);
    check_hypothesis(p, estimate_id);
}

}  // namespace nlb
