#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "nlb/energy_monitor.hpp"
#include "nlb/errors.hpp"
#include "oracles.hpp"

using namespace nlb;
using std::numbers::pi;

namespace {

SpectralField two_modes(const TorusGrid& g, int m, double a, double b) {
    SpectralField f(g);
    f.set_mode(m, a * pi);
    if (b != 0) f.set_mode(2 * m, b * pi);
    return f;
}

oracle::Omega om(double alpha) {
    return [alpha](double x) { return oracle::fkdv(x, alpha); };
}

}  // namespace

TEST(CubicForm, SingleModeVanishes) {
    const TorusGrid g(64);
    EXPECT_EQ(cubic_form(two_modes(g, 5, 1.0, 0.0), DispersiveSymbol::fkdv(1.0), 1.0, 1.0), 0.0);
}

TEST(CubicForm, TwoModeClosedSum) {
    // a cos(mx) + b cos(2mx): six triples (m, m, -2m) and sign flips, each b3(m, m) a^2 b pi^3
    const TorusGrid g(64);
    for (double alpha : {0.5, 1.0})
        for (int m : {3, 5, 9}) {
            const double a = 0.7, b = -1.3, s = 0.8, N0 = 4;
            const double want = 1.5 * pi * a * a * b * oracle::b3(om(alpha), s, N0, m, m);
            const double got = cubic_form(two_modes(g, m, a, b), DispersiveSymbol::fkdv(alpha), s, N0);
            EXPECT_NEAR(got, want, 1e-13 * std::fabs(want)) << alpha << ' ' << m;
        }
}

TEST(CubicForm, CutoffAboveBand) {
    gen::Rng r(61);
    const TorusGrid g(64);
    const auto f = r.field(g, 7, 1.0, 0.0);
    EXPECT_EQ(cubic_form(f, DispersiveSymbol::fkdv(1.0), 1.0, 8.0), 0.0);
    EXPECT_NE(cubic_form(f, DispersiveSymbol::fkdv(1.0), 1.0, 4.0), 0.0);
}

TEST(CubicFormProperty, MatchesBruteForce) {
    gen::Rng r(62);
    const TorusGrid g(64);
    for (int i = 0; i < 4; ++i) {
        const double alpha = r.uniform(0.3, 1.0), s = r.uniform(0.3, 2.0), sigma = r.uniform(-0.45, -0.1);
        const double N0 = std::ldexp(1.0, r.integer(0, 3));
        const auto sym = DispersiveSymbol::fkdv(alpha);
        const auto u = r.field(g, 31, r.uniform(0.2, 3), r.uniform(0, 1.5));
        const auto z = r.field(g, 31, r.uniform(0.2, 3), r.uniform(0, 1.5));
        double imag = 1;
        const double c = cubic_form(u, sym, s, N0, &imag);
        const double ref = oracle::cubic_bruteforce(u, om(alpha), s, N0);
        EXPECT_NEAR(c, ref, 1e-10 * std::fabs(ref));
        EXPECT_LT(imag, 1e-13);
        const double ct = cubic_form_tilde(u, z, sym, sigma, N0);
        const double reft = oracle::cubic_tilde_bruteforce(u, z, om(alpha), sigma, N0);
        EXPECT_NEAR(ct, reft, 1e-10 * std::fabs(reft));
    }
}

TEST(CubicForm, Errors) {
    const TorusGrid g(16);
    SpectralField f(g);
    for (int k = 1; k <= 3; ++k) f.set_mode(k, 1.0);
    const auto lin = DispersiveSymbol::custom(1.0, 1.0, [](double x, int o) { return o == 0 ? x : o == 1 ? 1.0 : 0.0; });
    EXPECT_THROW(cubic_form(f, lin, 1.0, 1.0), ResonantDivision);
    EXPECT_THROW(cubic_form_tilde(f, SpectralField(TorusGrid(32)), DispersiveSymbol::fkdv(1.0), -0.3, 1.0), InvalidInput);
    EXPECT_THROW(cubic_form(SpectralField(TorusGrid(2 * kMaxEnergyK)), DispersiveSymbol::fkdv(1.0), 1.0, 1.0),
                 InvalidParams);
}

TEST(Energies, SingleModeBreakdown) {
    const TorusGrid g(64);
    const auto sym = DispersiveSymbol::fkdv(1.0);
    const auto u = two_modes(g, 8, 1.0, 0.0);
    // ||cos 8x||^2 = pi, ||D^s cos 8x||^2 = 8^{2s} pi
    const auto e = modified_energy(u, sym, 0.75, 2.0);
    EXPECT_NEAR(e.quadratic, 0.5 * pi * (1 + std::pow(8.0, 1.5)), 1e-11);
    EXPECT_EQ(e.cubic, 0.0);
    EXPECT_DOUBLE_EQ(e.coefficient, 1.0 / 3.0);
    EXPECT_NEAR(high_freq_energy(u, sym, 0.75, 4.0).quadratic, 0.5 * pi * std::pow(8.0, 1.5), 1e-11);
    EXPECT_EQ(high_freq_energy(u, sym, 0.75, 8.0).quadratic, 0.0);
    const auto d = difference_energy(u, u, sym, -0.25, 2.0);
    EXPECT_NEAR(d.quadratic_high, 0.5 * pi * std::pow(8.0, -0.5), 1e-12);
    EXPECT_EQ(d.quadratic_low, 0.0);
    EXPECT_DOUBLE_EQ(d.coefficient, 0.5);
}

TEST(EnergiesProperty, TotalsAreConsistent) {
    gen::Rng r(63);
    const TorusGrid g(128);
    for (int i = 0; i < 10; ++i) {
        const auto sym = DispersiveSymbol::fkdv(r.uniform(0.3, 1.0));
        const auto u = r.field(g, 40, r.uniform(0.5, 5), 1.0);
        const auto z = r.field(g, 40, r.uniform(0.5, 5), 1.0);
        const double N0 = 4;
        for (const auto& e : {modified_energy(u, sym, 1.0, N0), high_freq_energy(u, sym, 1.0, N0),
                              difference_energy(u, z, sym, -0.3, N0)})
            EXPECT_DOUBLE_EQ(e.total, e.quadratic + e.coefficient * e.cubic);
        EXPECT_EQ(modified_energy(u, sym, 1.0, N0).cubic, high_freq_energy(u, sym, 1.0, N0).cubic);
    }
    SpectralField m(g);
    m.set_mode(0, 1.0);
    EXPECT_THROW(difference_energy(m, m, DispersiveSymbol::fkdv(1.0), -0.3, 1.0), MeanNotZero);
}

TEST(Coercivity, SingleModeIsExactAtSOne) {
    // cubic term vanishes and (1 + k^2) = 1 + |k|^2, so E equals ||u||_{H^1}^2 / 2
    const TorusGrid g(64);
    for (int m : {1, 3, 10}) {
        const auto r = coercivity_check(two_modes(g, m, 2.0, 0.0), DispersiveSymbol::fkdv(1.0), 1.0, 1.0, 0.1);
        EXPECT_NEAR(r.lhs, 0.0, 1e-12 * r.rhs);
        EXPECT_TRUE(r.pass);
    }
}

TEST(CoercivityProperty, GapShrinksWithN0) {
    gen::Rng r(64);
    const TorusGrid g(256);
    const auto sym = DispersiveSymbol::fkdv(1.0);
    for (int i = 0; i < 5; ++i) {
        const auto u = r.field(g, 80, r.log_uniform(4, 40), 1.5);
        const double lo = coercivity_check(u, sym, 1.0, 2.0, 1.0).gap_ratio;
        const double hi = coercivity_check(u, sym, 1.0, 64.0, 1.0).gap_ratio;
        EXPECT_LT(hi, lo);
        const auto z = r.field(g, 80, r.log_uniform(4, 40), 1.5);
        const double dlo = difference_coercivity_check(u, z, sym, -0.3, 1.0, 2.0, 1.0).gap_ratio;
        const double dhi = difference_coercivity_check(u, z, sym, -0.3, 1.0, 64.0, 1.0).gap_ratio;
        EXPECT_LT(dhi, dlo);
    }
}

TEST(Coercivity, HypothesisFlag) {
    const TorusGrid g(64);
    const auto sym = DispersiveSymbol::fkdv(1.0);
    const auto u = two_modes(g, 3, 1.0, 0.5);
    EXPECT_TRUE(coercivity_check(u, sym, 1.0, 1024.0, 0.1).in_hypothesis);
    EXPECT_FALSE(coercivity_check(u, sym, 1.0, 1.0, 10.0).in_hypothesis);  // N0 too small
    EXPECT_FALSE(coercivity_check(u, sym, 0.1, 1024.0, 0.1).in_hypothesis);  // below s~_alpha
    EXPECT_FALSE(coercivity_check(u, sym, 3.5, 1024.0, 0.1).in_hypothesis);
    const auto r = coercivity_check(u, sym, 1.0, 1024.0, 3.0);
    EXPECT_EQ(r.N0_required, std::exp2(std::ceil(std::log2(r.N0_required))));
    EXPECT_FALSE(difference_coercivity_check(u, u, sym, -0.1, 0.35, 1024.0, 0.1).in_hypothesis);
}

TEST(Strichartz, ConstantTrajectory) {
    const TorusGrid g(32);
    Trajectory tr;
    tr.times = {0.0, 0.5, 1.0};
    tr.fields.assign(3, two_modes(g, 1, 1.0, 0.0));
    const double s = 1.0, alpha = 1.0;
    const double r = s - (0.5 - 0.25 * alpha) - kStrichartzEps;
    // J^r cos x = 2^{r/2} cos x
    EXPECT_NEAR(strichartz_norm(tr, s, alpha), std::pow(2.0, r / 2), 1e-12);
    tr.times.pop_back();
    EXPECT_THROW(strichartz_norm(tr, s, alpha), InvalidInput);
    EXPECT_EQ(strichartz_norm(Trajectory{}, s, alpha), 0.0);
}
