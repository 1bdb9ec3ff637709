// Acceptance runner: one block per criterion, PASS/FAIL per line.
//
//   nlb_acceptance                 all criteria
//   nlb_acceptance --only 3 --only 7b
//   nlb_acceptance --json out.json

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nlb/energy_monitor.hpp"
#include "nlb/energy_symbols.hpp"
#include "nlb/errors.hpp"
#include "nlb/estimate_verifier.hpp"
#include "nlb/evolution.hpp"
#include "nlb/experiments.hpp"
#include "nlb/numeric.hpp"
#include "oracles.hpp"

using namespace nlb;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;
    json data = json::object();

    void check(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
        pass = pass && ok;
    }
    void note(const std::string& what) { lines.push_back("        " + what); }
};

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1: torus zero set of Omega_4
Outcome resonance_zero_set() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const int kmax = 32;
    const auto set = torus_resonant_set(kmax);
    for (const auto& s : {DispersiveSymbol::fkdv(0.5), DispersiveSymbol::fkdv(1.0), DispersiveSymbol::smith()}) {
        long mismatches = 0, zeros = 0;
        for (int a = -kmax; a <= kmax; ++a)
            for (int b = -kmax; b <= kmax; ++b)
                for (int c = -kmax; c <= kmax; ++c) {
                    const std::array<double, 4> q{double(a), double(b), double(c), double(-(a + b + c))};
                    const bool zero = std::fabs(resonance(s, q)) <= 1e-10;
                    const bool prod = (long long)(a + b) * (a + c) * (b + c) == 0;
                    mismatches += zero != prod;
                    zeros += zero;
                }
        o.check(mismatches == 0, fmt("%s: %ld mismatches, %ld zeros", s.name().c_str(), mismatches, zeros));
        o.check(std::size_t(zeros) == set.size(), fmt("%s: zero count equals |torus_resonant_set(32)| = %zu",
                                                      s.name().c_str(), set.size()));
    }
    const double dt = seconds_since(t0);
    o.check(dt < 30, fmt("runtime %.2f s < 30 s", dt));
    return o;
}

// 2: two-sided Omega_3 / Omega_4 bands
Outcome two_sided_bands() {
    Outcome o;
    const std::vector<DispersiveSymbol> syms{DispersiveSymbol::fkdv(0.25), DispersiveSymbol::fkdv(0.5),
                                             DispersiveSymbol::fkdv(0.75), DispersiveSymbol::fkdv(1.0),
                                             DispersiveSymbol::whitham(1.0)};
    auto run = [&](const DispersiveSymbol& s, Quantity q, const std::string& reg) {
        SamplerArgs a;
        a.region = reg;
        a.n = 10000;
        a.N_lo = 64 * s.xi0();
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = verify_two_sided(s, q, a);
        const double dt = seconds_since(t0);
        const double spread = r.sup_ratio / r.inf_ratio;
        const bool ok = r.inf_ratio > 0 && spread <= 1e3 && std::fabs(r.trend_slope) <= 0.05 && dt < 5;
        o.check(ok, fmt("%-22s %s %-3s inf %.3g sup %.3g spread %.3g slope %+.4f %.2f s", s.name().c_str(),
                        q == Quantity::omega3 ? "O3" : "O4", reg.c_str(), r.inf_ratio, r.sup_ratio, spread,
                        r.trend_slope, dt));
    };
    for (const auto& s : syms) {
        for (const char* reg : {"sim", "ll"}) run(s, Quantity::omega3, reg);
        for (const char* reg : {"A", "B1", "B2", "C1", "C2", "C3", "C4"}) run(s, Quantity::omega4, reg);
    }
    return o;
}

// 3: one-sided symbol bounds and the exact antidiagonal vanishing
Outcome one_sided_bounds() {
    Outcome o;
    OneSidedOptions opt;
    opt.enforce_hypothesis = false;
    for (double alpha : {0.5, 1.0})
        for (double s : {0.3, 1.0})
            for (double sigma : {-0.2, -0.35}) {
                const EnergySymbolParams p{DispersiveSymbol::fkdv(alpha), s, sigma, 1.0};
                for (const auto& e : estimate_table()) {
                    SamplerArgs a;
                    a.n = 10000;
                    bool in_hyp = true;
                    try {
                        check_estimate_hypothesis(p, e.id);
                    } catch (const InvalidParams&) {
                        in_hyp = false;
                    }
                    const auto r = verify_one_sided(p, e.id, a, opt);
                    const bool ok = std::isfinite(r.sup_ratio) && r.trend_slope <= 0.05;
                    o.check(ok, fmt("alpha %.1f s %.1f sigma %+.2f %-19s sup %.3g slope %+.4f%s", alpha, s, sigma,
                                    e.id.c_str(), r.sup_ratio, r.trend_slope, in_hyp ? "" : "  (outside window)"));
                }
            }
    std::mt19937_64 eng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long nonzero = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x = std::exp2(1 + 29 * u(eng)) * (u(eng) < 0.5 ? -1 : 1);
        const double z = std::exp2(1 + 29 * u(eng)) * (u(eng) < 0.5 ? -1 : 1);
        for (double alpha : {0.5, 1.0})
            for (double sigma : {-0.2, -0.35}) {
                const EnergySymbolParams p{DispersiveSymbol::fkdv(alpha), 1.0, sigma, 1.0};
                nonzero += a4_tilde(p, x, -x, z).total != 0.0;
                nonzero += a44_tilde(p, x, -x) != 0.0;
            }
    }
    o.check(nonzero == 0, fmt("xi1 + xi2 = 0: a4~ and a44~ vanish exactly on 1000 tuples (%ld nonzero)", nonzero));
    return o;
}

// 4: exponential sums
Outcome exp_sums() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (double alpha : {0.5, 1.0}) {
        const auto r = verify_exp_sum(DispersiveSymbol::fkdv(alpha), {64, 128, 256, 512, 1024}, 48, 4096);
        o.check(std::isfinite(r.sup_ratio) && r.trend_slope <= 0.05,
                fmt("alpha %.1f: sup %.4g slope %+.4f", alpha, r.sup_ratio, r.trend_slope));
    }
    const double dt = seconds_since(t0);
    o.check(dt < 60, fmt("runtime %.2f s < 60 s", dt));
    return o;
}

// 5: conservation and temporal order
Outcome solver_quality() {
    Outcome o;
    const TorusGrid g(256);
    // trigonometric polynomial on modes 1..3, resolved far below the cutoff
    ProfileSpec data;
    data.profile = "modes";
    const double a = 0.5 * std::numbers::pi;
    data.modes = {{1, {0.6 * a, 0.0}}, {2, {0.3 * a, -0.4 * a}}, {3, {-0.2 * a, 0.1 * a}}};
    const auto u0 = make_initial(g, data);
    auto drifts = [&](const DispersiveSymbol& sym) {
        SolverConfig c;
        c.dt = 1e-3;
        c.T = 1.0;
        c.snapshot_stride = 1 << 20;
        const auto tr = simulate(u0, sym, c);
        double dm = 0, dh = 0;
        for (std::size_t n = 0; n < tr.mass.size(); ++n) {
            dm = std::max(dm, std::fabs(tr.mass[n] - tr.mass[0]) / std::fabs(tr.mass[0]));
            dh = std::max(dh, std::fabs(tr.hamiltonian[n] - tr.hamiltonian[0]) / std::fabs(tr.hamiltonian[0]));
        }
        return std::pair{dm, dh};
    };
    for (const auto& sym : {DispersiveSymbol::fkdv(0.5), DispersiveSymbol::fkdv(1.0), DispersiveSymbol::whitham(1.0),
                            DispersiveSymbol::ilw(1.0), DispersiveSymbol::smith()}) {
        const auto [dm, dh] = drifts(sym);
        o.check(dm <= 1e-10 && dh <= 1e-8, fmt("%-22s mass drift %.3g  hamiltonian drift %.3g", sym.name().c_str(), dm, dh));
    }
    // weak dispersion steepens this data past the K = 256 resolution; reported only
    const auto [dm, dh] = drifts(DispersiveSymbol::fkdv(0.25));
    o.note(fmt("info: fkdv(alpha=0.25) mass drift %.3g  hamiltonian drift %.3g", dm, dh));
    const auto sym = DispersiveSymbol::fkdv(1.0);
    std::vector<SpectralField> end;
    for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
        SolverConfig c;
        c.dt = dt;
        c.T = 0.5;
        c.snapshot_stride = 1 << 20;
        end.push_back(simulate(u0, sym, c).fields.back());
    }
    auto diff = [&](std::size_t a, std::size_t b) {
        double m = 0;
        for (int i = 0; i < g.K(); ++i) m = std::max(m, std::abs(end[a][i] - end[b][i]));
        return m;
    };
    const double p1 = std::log2(diff(0, 1) / diff(1, 2)), p2 = std::log2(diff(1, 2) / diff(2, 3));
    o.check(std::min(p1, p2) >= 3.8, fmt("etdrk4 observed order %.3f, %.3f (dt 4e-3 .. 5e-4)", p1, p2));
    o.data["order"] = {p1, p2};
    return o;
}

// 6: coercivity of both energies
Outcome coercivity() {
    Outcome o;
    const CoercivityStudyConfig cfg;
    auto report = [&](const char* label, const CoercivityStudy& st) {
        o.check(st.n_pass == st.n_test, fmt("%s: %d/%d fields pass at N0 >= C1 (1 + ||.||)^p, C1 = %.4g", label,
                                            st.n_pass, st.n_test, st.C1));
        std::string gaps;
        for (std::size_t i = 0; i < st.N0s.size(); ++i) gaps += fmt(" %g:%.3g", st.N0s[i], st.max_gap[i]);
        o.check(st.N0s.size() >= 5 && non_increasing(st.max_gap, 0.05),
                fmt("%s: gap non-increasing over %zu doublings (5%% slack)", label, st.N0s.size() - 1));
        o.note(std::string("N0:gap") + gaps);
        o.data[label] = {{"C1", st.C1}, {"N0", st.N0s}, {"max_gap", st.max_gap}, {"n_pass", st.n_pass}};
    };
    report("solution", run_coercivity_study(cfg));
    report("difference", run_difference_coercivity_study(cfg));
    return o;
}

// 7: quasi-conservation on a fixed smooth alpha = 1 solution
std::vector<EnergyStudyRow> energy_rows() {
    static std::vector<EnergyStudyRow> rows;
    if (rows.empty()) {
        EnergyStudyConfig c;
        c.data.amplitude = 1.0;
        c.data.s = 2.0;
        c.solver.dt = 0.0009765625;
        c.T_list = {0.125, 0.25, 0.5, 1.0};
        c.N0s = {16, 32, 64, 128, 256};
        c.monitor_stride = 8;
        rows = run_energy_study(c);
    }
    return rows;
}

Outcome high_energy_in_N0() {
    Outcome o;
    std::vector<double> d;
    std::string line;
    for (const auto& r : energy_rows())
        if (r.T == 1.0) {
            d.push_back(r.drift_high);
            line += fmt(" %g:%.3e", r.N0, r.drift_high);
        }
    o.check(d.size() == 5 && non_increasing(d, 0.0, 1e-13), "sup_t |E_{>N0}(t) - E_{>N0}(0)| non-increasing, N0 = 16..256");
    o.note("N0:drift" + line);
    return o;
}

Outcome energy_linear_in_T() {
    Outcome o;
    std::vector<double> d;
    for (const auto& r : energy_rows())
        if (r.N0 == 16) d.push_back(r.drift_energy);
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double ratio = d[i] / d[i - 1];
        o.check(ratio <= 2 * 1.05, fmt("N0 = 16: D(%.3g) / D(%.3g) = %.3f (linear growth allows 2.10)",
                                       0.125 * double(1 << i), 0.125 * double(1 << (i - 1)), ratio));
    }
    o.data["drift"] = d;
    return o;
}

// 8: truncation and Lipschitz studies at K = 1024
Outcome well_posedness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    TruncationConfig tc;
    tc.data.s = 0.6;
    const auto tt = run_truncation_study(tc);
    bool finite = true;
    for (const auto& r : tt.rows) {
        finite = finite && std::isfinite(r.ratio);
        o.note(fmt("m %d n %2d diff %.4e tail %.4e ratio %.4f", r.m, r.n, r.diff, r.tail, r.ratio));
    }
    o.check(finite && tt.ratio_spread > 0 && tt.ratio_spread <= 4,
            fmt("truncation constant spread %.3f over m = 4..8 (limit 4)", tt.ratio_spread));
    LipschitzConfig lc;
    lc.data = tc.data;
    const auto lt = run_lipschitz_study(lc);
    finite = true;
    for (const auto& r : lt.rows) finite = finite && std::isfinite(r.ratio) && !r.zero_difference;
    for (std::size_t i = 0; i < lt.max_ratio_per_amplitude.size(); ++i)
        o.note(fmt("amplitude %g max ratio %.5f", lc.amplitudes[i], lt.max_ratio_per_amplitude[i]));
    o.check(finite && lt.uniformity <= 4,
            fmt("lipschitz ratio uniformity %.4f over %zu pairs (limit 4)", lt.uniformity, lt.rows.size()));
    const double dt = seconds_since(t0);
    o.check(dt < 1800, fmt("runtime %.1f s < 1800 s", dt));
    o.data["truncation_spread"] = tt.ratio_spread;
    o.data["lipschitz_uniformity"] = lt.uniformity;
    return o;
}

// 9: fast sums against brute-force references
Outcome oracle_equivalences() {
    Outcome o;
    const TorusGrid g(64);
    const auto sym = DispersiveSymbol::fkdv(1.0);
    const oracle::Omega om = [](double x) { return oracle::fkdv(x, 1.0); };
    for (std::uint64_t seed : {1, 2, 3}) {
        ProfileSpec p;
        p.s = 0.5;
        p.kmax = 31;
        p.seed = seed;
        const auto u = make_initial(g, p);
        p.seed = seed + 100;
        const auto z = make_initial(g, p);
        const double c = cubic_form(u, sym, 1.0, 2.0), cb = oracle::cubic_bruteforce(u, om, 1.0, 2.0);
        const double ct = cubic_form_tilde(u, z, sym, -0.3, 2.0), ctb = oracle::cubic_tilde_bruteforce(u, z, om, -0.3, 2.0);
        const double e1 = std::fabs(c - cb) / std::fabs(cb), e2 = std::fabs(ct - ctb) / std::fabs(ctb);
        o.check(e1 <= 1e-10, fmt("seed %llu: E3 vs triple loop, relative %.3g", (unsigned long long)seed, e1));
        o.check(e2 <= 1e-10, fmt("seed %llu: E~ cubic vs triple loop, relative %.3g", (unsigned long long)seed, e2));
        const auto d = dealias(u);
        const auto n = nonlinearity(d);
        const auto ref = oracle::dx_square_convolution(d, dealias_cutoff(g, kDefaultDealias));
        double err = 0, scale = 0;
        for (int i = 0; i < g.K(); ++i) {
            err = std::max(err, std::abs(n[i] - ref[std::size_t(i)]));
            scale = std::max(scale, std::abs(ref[std::size_t(i)]));
        }
        o.check(err <= 1e-12 * scale, fmt("seed %llu: d_x(u^2) vs convolution, relative %.3g",
                                         (unsigned long long)seed, err / scale));
    }
    return o;
}

struct Criterion {
    std::string id, title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<std::string> only;
    std::string json_path;
    app.add_option("--only", only, "criterion ids (1..9, 7a, 7b); repeatable");
    app.add_option("--json", json_path, "write a JSON summary");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {"1", "resonance identities on the torus", resonance_zero_set},
        {"2", "Omega_3 / Omega_4 two-sided equivalences", two_sided_bands},
        {"3", "one-sided symbol bounds", one_sided_bounds},
        {"4", "exponential sums / short-time Strichartz", exp_sums},
        {"5", "solver quality", solver_quality},
        {"6", "energy coercivity", coercivity},
        {"7a", "high-frequency energy drift non-increasing in N0", high_energy_in_N0},
        {"7b", "modified energy drift at most linear in T", energy_linear_in_T},
        {"8", "well-posedness mechanics", well_posedness},
        {"9", "oracle equivalences", oracle_equivalences},
    };
    auto selected = [&](const std::string& id) {
        if (only.empty()) return true;
        for (const auto& s : only)
            if (s == id || (id.size() == 2 && s == id.substr(0, 1))) return true;
        return false;
    };

    json summary = json::array();
    bool all_pass = true;
    int ran = 0;
    for (const auto& c : all) {
        if (!selected(c.id)) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double dt = seconds_since(t0);
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title
                  << fmt("  (%.1f s)", dt) << '\n';
        for (const auto& l : o.lines) std::cout << l << '\n';
        std::cout.flush();
        all_pass = all_pass && o.pass;
        summary.push_back({{"id", c.id}, {"title", c.title}, {"pass", o.pass}, {"seconds", dt}, {"data", o.data}});
    }
    if (ran == 0) {
        std::cerr << "no criterion matches --only\n";
        return 2;
    }
    std::cout << (all_pass ? "ALL PASS" : "SOME FAILED") << '\n';
    if (!json_path.empty()) std::ofstream(json_path) << summary.dump(2) << '\n';
    return all_pass ? 0 : 1;
}
