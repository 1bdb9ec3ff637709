#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "nlb/errors.hpp"
#include "nlb/estimate_verifier.hpp"
#include "nlb/numeric.hpp"
#include "oracles.hpp"

using namespace nlb;

namespace {

SamplerArgs args(const std::string& region, std::size_t n, double lo, double hi, std::uint64_t seed) {
    SamplerArgs a;
    a.region = region;
    a.n = n;
    a.N_lo = lo;
    a.N_hi = hi;
    a.seed = seed;
    return a;
}

}  // namespace

TEST(Sampler, RegionAExample) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    const auto t = sample_tuples(s, args("A", 100, 256, 65536, 7));
    ASSERT_EQ(t.size(), 100u);
    for (const auto& x : t) EXPECT_EQ(classify_region(x, s).tag, Region::A);
}

TEST(Sampler, EveryRegionAgreesWithOracle) {
    const auto s = DispersiveSymbol::fkdv(0.5);
    for (const char* r : {"A", "B1", "B2", "C1", "C2", "C3", "C4"}) {
        const auto t = sample_tuples(s, args(r, 500, 256, 1 << 20, 3));
        ASSERT_EQ(t.size(), 500u);
        for (const auto& x : t) {
            EXPECT_TRUE(on_hyperplane(x));
            EXPECT_STREQ(oracle::region(x), r);
        }
    }
}

TEST(Sampler, C3Ordering) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    for (const auto& x : sample_tuples(s, args("C3", 100, 256, 65536, 9))) {
        const auto lab = classify_region(x, s);
        const auto& N = lab.dyadic.N;
        EXPECT_TRUE(dyadic_ll(N[0], N[2]));
        EXPECT_TRUE(dyadic_ll(N[2], N[1]));
        EXPECT_TRUE(dyadic_sim(N[1], N[3]));
    }
}

TEST(Sampler, Deterministic) {
    const auto s = DispersiveSymbol::whitham(1.0);
    for (const char* r : {"A", "C4", "global"}) {
        const auto a = args(r, 300, 64, 1 << 16, 42);
        EXPECT_EQ(sample_tuples(s, a), sample_tuples(s, a));
        auto b = a;
        b.seed = 43;
        EXPECT_NE(sample_tuples(s, a), sample_tuples(s, b));
    }
    const auto a = args("sim", 300, 64, 1 << 16, 42);
    EXPECT_EQ(sample_triples(s, a), sample_triples(s, a));
}

TEST(Sampler, ThreadCountDoesNotChangeSamples) {
    const auto s = DispersiveSymbol::fkdv(0.75);
    const auto a = args("global", 3000, 64, 1 << 20, 5);
    set_num_threads(1);
    const auto one = sample_tuples(s, a);
    set_num_threads(3);
    const auto three = sample_tuples(s, a);
    set_num_threads(1);
    EXPECT_EQ(one, three);
}

TEST(Sampler, Ranges) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    EXPECT_THROW(sample_tuples(s, args("A", 10, 32, 1024, 1)), InvalidRange);
    EXPECT_THROW(sample_tuples(s, args("A", 10, 1024, 512, 1)), InvalidRange);
    EXPECT_THROW(sample_tuples(s, args("A", 10, 64, std::ldexp(1.0, 31), 1)), InvalidRange);
    EXPECT_THROW(sample_tuples(s, args("Q", 10, 64, 1024, 1)), InvalidInput);
    EXPECT_THROW(sample_triples(s, args("A", 10, 64, 1024, 1)), InvalidInput);
}

TEST(Sampler, TriplesRespectRegime) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    for (const auto& t : sample_triples(s, args("ll", 500, 64, 1 << 20, 2))) {
        const double a = std::fabs(t[0]), b = std::fabs(t[1]);
        EXPECT_TRUE(dyadic_ll(dyadic(a), dyadic(b)) || dyadic_ll(dyadic(b), dyadic(a)));
        EXPECT_NEAR(t[0] + t[1] + t[2], 0.0, 1e-12 * std::max({a, b, std::fabs(t[2])}));
    }
    for (const auto& t : sample_triples(s, args("sim", 500, 64, 1 << 20, 2)))
        EXPECT_TRUE(dyadic_sim(dyadic(t[0]), dyadic(t[1])));
}

TEST(TwoSided, Omega3DiagonalRatioIsOne) {
    // Omega_3(N, N, -2N) = -2N^2 against N_min N_max = N (2N) in dyadic terms
    const auto s = DispersiveSymbol::fkdv(1.0);
    std::vector<std::array<double, 3>> t;
    for (int j = 6; j <= 20; ++j) t.push_back({std::ldexp(1.0, j), std::ldexp(1.0, j), -std::ldexp(1.0, j + 1)});
    const auto r = verify_omega3(s, t);
    EXPECT_EQ(r.inf_ratio, 1.0);
    EXPECT_EQ(r.sup_ratio, 1.0);
    EXPECT_EQ(r.trend_slope, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(TwoSided, Omega4ScaledQuadruple) {
    // |Omega_4(2^j (1, 2, 3, -6))| = 22 4^j.  Raw M = (5, 4, 3) 2^j gives 12 4^j
    // (ratio 11/6); the dyadic comparator uses (4, 4, 2) 2^j, i.e. 8 4^j.
    const auto s = DispersiveSymbol::fkdv(1.0);
    std::vector<std::array<double, 4>> t;
    for (int j = 6; j <= 20; ++j) {
        const double f = std::ldexp(1.0, j);
        const std::array<double, 4> x{f, 2 * f, 3 * f, -6 * f};
        EXPECT_DOUBLE_EQ(std::fabs(resonance(s, x)) / classify_region(x, s).raw.omega_comparator, 11.0 / 6.0);
        t.push_back(x);
    }
    const auto r = verify_omega4(s, t);
    EXPECT_DOUBLE_EQ(r.inf_ratio, 22.0 / 8.0);
    EXPECT_DOUBLE_EQ(r.sup_ratio, 22.0 / 8.0);
}

TEST(TwoSided, EmptyInput) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    EXPECT_THROW(verify_omega3(s, {}), InvalidInput);
    EXPECT_THROW(verify_omega4(s, {}), InvalidInput);
}

TEST(TwoSidedProperty, HomogeneousScalingInvariance) {
    gen::Rng r(31);
    for (double a : {0.25, 0.5, 1.0}) {
        const auto s = DispersiveSymbol::fkdv(a);
        std::vector<std::array<double, 4>> t, t2;
        for (int i = 0; i < 200; ++i) {
            auto x = r.quadruple(64, 1e6);
            t.push_back(x);
            for (auto& v : x) v *= 2;
            t2.push_back(x);
        }
        const auto r1 = verify_omega4(s, t), r2 = verify_omega4(s, t2);
        EXPECT_NEAR(r1.inf_ratio, r2.inf_ratio, 1e-12 * r1.inf_ratio);
        EXPECT_NEAR(r1.sup_ratio, r2.sup_ratio, 1e-12 * r1.sup_ratio);
    }
}

TEST(TwoSidedProperty, FixedBands) {
    for (const auto& s : {DispersiveSymbol::fkdv(0.5), DispersiveSymbol::fkdv(1.0), DispersiveSymbol::whitham(1.0)}) {
        for (const char* reg : {"sim", "ll"}) {
            const auto r = verify_two_sided(s, Quantity::omega3, args(reg, 4000, 64, 1 << 24, 8));
            EXPECT_TRUE(r.pass) << s.name() << ' ' << reg;
            EXPECT_GT(r.inf_ratio, 0.0);
            EXPECT_LE(r.sup_ratio / r.inf_ratio, 1e3);
        }
        for (const char* reg : {"A", "B1", "B2", "C1", "C2", "C3", "C4"}) {
            const auto r = verify_two_sided(s, Quantity::omega4, args(reg, 2000, 64, 1 << 24, 8));
            EXPECT_TRUE(r.pass) << s.name() << ' ' << reg;
        }
    }
}

TEST(OneSided, A4TildeAMatchesOracle) {
    const EnergySymbolParams p{DispersiveSymbol::fkdv(1.0), 1.0, -0.25, 1.0};
    auto a = args("default", 10000, 65536, std::ldexp(1.0, 30), 1);
    const auto r = verify_one_sided(p, "a4tilde-A", a);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.n_samples, 10000u);
    // the same tuples, ratio recomputed with the oracle symbol and dyadic N_max
    a.region = "A";
    const auto tuples = sample_tuples(p.sym, a);
    const oracle::Omega om = [](double x) { return oracle::fkdv(x, 1.0); };
    double sup = 0;
    for (const auto& x : tuples) {
        std::array<double, 4> y = x;
        if (std::fabs(y[0]) > std::fabs(y[1])) std::swap(y[0], y[1]);
        if (std::fabs(y[2]) > std::fabs(y[3])) std::swap(y[2], y[3]);
        double nmax = 0;
        for (double v : y) nmax = std::max(nmax, oracle::dyadic(v));
        const double q = std::fabs(oracle::a4_tilde(om, -0.25, 1.0, y[0], y[1], y[2]));
        sup = std::max(sup, q / std::pow(nmax, 2 * -0.25 + 1 - 1.0));
    }
    EXPECT_NEAR(r.sup_ratio, sup, 1e-6 * sup);
    // frozen from the oracle run above
    EXPECT_NEAR(r.sup_ratio, 11.0256038, 1e-6);
}

TEST(OneSided, A4TildeOnAntidiagonalIsZero) {
    const EnergySymbolParams p{DispersiveSymbol::fkdv(1.0), 1.0, -0.25, 1.0};
    gen::Rng r(32);
    std::vector<std::array<double, 4>> t;
    for (int i = 0; i < 1000; ++i) {
        const double x = r.freq(1e5, 1e8), z = r.freq(1e5, 1e8);
        t.push_back({x, -x, z, -z});
    }
    for (const char* id : {"a4tilde-A", "a4tilde-C1", "a4tilde-C4"}) {
        const auto rep = verify_one_sided_tuples(p, id, t);
        EXPECT_EQ(rep.sup_ratio, 0.0) << id;
        EXPECT_EQ(rep.inf_ratio, 0.0) << id;
    }
}

TEST(OneSided, Hypothesis) {
    EnergySymbolParams p{DispersiveSymbol::fkdv(1.0), 1.0, -0.6, 1.0};
    EXPECT_THROW(verify_one_sided(p, "a4tilde-A", args("default", 100, 65536, 1 << 20, 1)), InvalidParams);
    EXPECT_THROW(check_estimate_hypothesis(p, "a44tilde"), InvalidParams);
    p.sigma = -0.2;
    p.sym = DispersiveSymbol::fkdv(0.5);
    EXPECT_THROW(check_estimate_hypothesis(p, "a4tilde-B1"), InvalidParams);
    OneSidedOptions loose;
    loose.enforce_hypothesis = false;
    EXPECT_NO_THROW(verify_one_sided(p, "a4tilde-B1", args("default", 100, 65536, 1 << 20, 1), loose));
    EXPECT_THROW(check_estimate_hypothesis(p, "no-such-estimate"), InvalidInput);
}

TEST(OneSided, TableIsComplete) {
    std::vector<std::string> ids;
    for (const auto& e : estimate_table()) ids.push_back(e.id);
    const std::vector<std::string> want{"est-a4", "b3tilde-1", "b3tilde-2", "a4tilde-A", "a4tilde-B1",
                                        "a4tilde-B2", "a4tilde-C1", "a4tilde-C2", "a4tilde-C3-rough",
                                        "a4tilde-C3-refined", "a4tilde-C4", "a44tilde"};
    EXPECT_EQ(ids, want);
    EXPECT_THROW(estimate_info("x"), InvalidInput);
}

TEST(OneSided, ReportInvariants) {
    const EnergySymbolParams p{DispersiveSymbol::fkdv(1.0), 1.0, -0.3, 1.0};
    for (const auto& e : estimate_table()) {
        const auto r = verify_one_sided(p, e.id, args("default", 2000, 65536, std::ldexp(1.0, 30), 4));
        EXPECT_LE(0.0, r.inf_ratio) << e.id;
        EXPECT_LE(r.inf_ratio, r.sup_ratio) << e.id;
        EXPECT_LE(r.violations.size(), kMaxViolations);
        for (std::size_t i = 1; i < r.violations.size(); ++i)
            EXPECT_GE(r.violations[i - 1].ratio, r.violations[i].ratio);
        EXPECT_EQ(r.pass, std::isfinite(r.sup_ratio) && r.trend_slope <= kBoundTrendTolerance) << e.id;
    }
}

TEST(ExpSum, ProfileMatchesDirectSum) {
    const auto s = DispersiveSymbol::fkdv(0.5);
    const oracle::Omega om = [](double x) { return oracle::fkdv(x, 0.5); };
    const int N = 64, n_x = 512;
    for (double t : {1e-4, 3e-3, 0.1}) {
        const auto prof = exp_sum_profile(s, N, t, n_x);
        for (int j : {0, 1, 77, 300, 511}) {
            const double x = 2 * std::numbers::pi * j / n_x;
            EXPECT_NEAR(prof[std::size_t(j)], oracle::exp_sum(om, N, t, x), 1e-9) << t << ' ' << j;
        }
    }
}

TEST(ExpSum, SmallTimeAndZeroSymbol) {
    const auto s = DispersiveSymbol::fkdv(1.0);
    const int N = 64;
    int modes = 0;
    for (int k = -2 * N; k <= 2 * N; ++k) modes += 2 * std::abs(k) >= N;
    EXPECT_NEAR(exp_sum_profile(s, N, 1e-12, 256)[0], modes, 1e-6);
    const auto zero = DispersiveSymbol::custom(1.0, 1.0, [](double, int) { return 0.0; });
    EXPECT_DOUBLE_EQ(exp_sum_profile(zero, N, 0.7, 1024)[0], modes);
    const auto p = exp_sum_point(s, N, 32, 512);
    EXPECT_EQ(p.n_modes, std::size_t(modes));
    EXPECT_LE(p.sup_scaled, modes * std::sqrt(std::pow(N, -1.0)) + 1e-9);
}

TEST(ExpSum, BoundedAcrossN) {
    for (double a : {0.5, 1.0}) {
        const auto r = verify_exp_sum(DispersiveSymbol::fkdv(a), {64, 128, 256, 512, 1024}, 48, 4096);
        EXPECT_TRUE(r.pass) << a;
        EXPECT_LE(r.trend_slope, 0.05);
        EXPECT_LT(r.sup_ratio, 10.0);
    }
    EXPECT_THROW(exp_sum_point(DispersiveSymbol::fkdv(1.0), 32, 8, 64), InvalidRange);
}
