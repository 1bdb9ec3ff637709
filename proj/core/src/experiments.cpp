#include "nlb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nlb/errors.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

namespace {

int band_top(const TorusGrid& g, int kmax) {
    const int cut = dealias_cutoff(g, kDefaultDealias);
    return kmax > 0 ? std::min(kmax, g.K() / 2 - 1) : cut;
}

// Unimodular Hermitian phases, amplitude a(k) for klo <= |k| <= khi.
template <class Amp>
SpectralField random_phases(const TorusGrid& g, int klo, int khi, std::uint64_t seed, Amp amp) {
    SpectralField f(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    for (int k = std::max(klo, 1); k <= khi; ++k) {
        const double th = U(rng);
        f.set_mode(k, std::polar(amp(k), th));
    }
    return f;
}

double sup_abs_diff(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x - v.front()));
    return m;
}

}  // namespace

SpectralField make_initial(const TorusGrid& g, const ProfileSpec& p) {
    validate(p, g);
    if (p.profile == "bump") {
        std::vector<double> v(static_cast<std::size_t>(g.K()));
        const double w2 = p.width * p.width;
        for (int j = 0; j < g.K(); ++j) {
            const double x = 2.0 * std::numbers::pi * g.x(j) / g.L();
            v[std::size_t(j)] = p.amplitude * std::exp((std::cos(x) - 1.0) / w2);
        }
        auto f = to_spectral(g, v);
        f[0] = 0.0;
        f.symmetrize();
        return f;
    }
    if (p.profile == "random_sobolev") {
        const int top = band_top(g, p.kmax);
        return random_phases(g, 1, top, p.seed, [&](int k) {
            return p.amplitude * std::pow(1.0 + double(k) * k, -0.5 * p.s - 0.25);
        });
    }
    if (p.profile == "modes") {
        SpectralField f(g);
        for (const auto& [k, c] : p.modes) {
            if (2 * std::abs(k) >= g.K()) throw InvalidParams("mode outside the grid");
            f.set_mode(k, k == 0 ? cplx(c.real(), 0.0) : c);
        }
        return f;
    }
    throw InvalidInput("unknown profile: " + p.profile);
}

double short_time(double nrm, double A1, double beta1) {
    if (!(A1 > 0) || !(beta1 >= 0)) throw InvalidParams("A1 must be positive and beta1 non-negative");
    return A1 * std::pow(1.0 + nrm, -beta1);
}

void validate(const ProfileSpec& p, const TorusGrid& g) {
    if (p.profile == "bump") {
        if (!(p.width > 0)) throw InvalidParams("bump width must be positive");
    } else if (p.profile == "random_sobolev") {
        if (p.kmax < 0) throw InvalidParams("kmax must be non-negative");
    } else if (p.profile == "modes") {
        for (const auto& m : p.modes)
            if (2 * std::abs(m.first) >= g.K()) throw InvalidParams("mode outside the grid");
    } else {
        throw InvalidParams("unknown profile: " + p.profile);
    }
    if (!std::isfinite(p.amplitude) || !std::isfinite(p.s))
        throw InvalidParams("profile amplitude and s must be finite");
}

namespace {

void check_step(double dt) {
    if (!(dt > 0) || !std::isfinite(dt)) throw InvalidParams("dt must be positive");
}

}  // namespace

void validate(const TruncationConfig& cfg) {
    validate(cfg.data, cfg.grid);
    check_step(cfg.dt);
    if (cfg.levels.empty()) throw InvalidParams("truncation study needs at least one level");
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        if (cfg.levels[i] < 0 || cfg.levels[i] > 30) throw InvalidParams("truncation levels must lie in 0..30");
        if (i > 0 && cfg.levels[i] <= cfg.levels[i - 1])
            throw InvalidParams("truncation levels must increase");
    }
    if ((1 << cfg.levels.back()) > dealias_cutoff(cfg.grid, kDefaultDealias))
        throw InvalidParams("2^n_max exceeds the retained band K/3");
    if (!(cfg.s > s_alpha(cfg.sym.alpha())))
        throw InvalidParams("truncation study requires s > s_alpha");
    short_time(0.0, cfg.A1, cfg.beta1);
}

void validate(const LipschitzConfig& cfg) {
    validate(cfg.data, cfg.grid);
    check_step(cfg.dt);
    const double a = cfg.sym.alpha();
    if (!(cfg.s > s_alpha(a))) throw InvalidParams("lipschitz study requires s > s_alpha");
    if (cfg.enforce_window &&
        !(cfg.sigma > -0.5 + 0.25 * a && cfg.sigma < std::min(0.0, cfg.s - 0.5)))
        throw InvalidParams("sigma outside the admissible window");
    if (cfg.n_seeds < 1 || cfg.amplitudes.empty())
        throw InvalidParams("lipschitz study needs seeds and amplitudes");
    for (double x : cfg.amplitudes)
        if (!(x > 0) || !std::isfinite(x)) throw InvalidParams("amplitudes must be positive");
    if (cfg.perturb_kmin < 1 || cfg.perturb_kmin > band_top(cfg.grid, cfg.data.kmax))
        throw InvalidParams("perturbation band is empty");
    short_time(0.0, cfg.A1, cfg.beta1);
}

void validate(const ConservationConfig& cfg) {
    if (cfg.symbols.empty() || cfg.Ks.empty() || cfg.dts.empty())
        throw InvalidParams("conservation study needs symbols, Ks and dts");
    if (!(cfg.T > 0)) throw InvalidParams("T must be positive");
    for (int K : cfg.Ks) {
        const TorusGrid g(K);
        validate(cfg.data, g);
        for (double dt : cfg.dts) {
            check_step(dt);
            SolverConfig sc;
            sc.T = cfg.T;
            sc.dt = dt;
            sc.scheme = cfg.scheme;
            for (const auto& sym : cfg.symbols) validate(sc, sym, g);
        }
    }
}

void validate(const EnergyStudyConfig& cfg) {
    validate(cfg.data, cfg.grid);
    if (cfg.N0s.empty()) throw InvalidParams("energy study needs an N0 list");
    for (double N0 : cfg.N0s)
        if (!(N0 > 0)) throw InvalidParams("N0 values must be positive");
    if (cfg.monitor_stride < 1) throw InvalidParams("monitor stride must be positive");
    if (cfg.grid.K() > kMaxEnergyK) throw InvalidParams("K above the energy evaluation cap");
    SolverConfig sc = cfg.solver;
    for (double T : cfg.T_list)
        if (!(T > 0)) throw InvalidParams("T values must be positive");
    if (!cfg.T_list.empty()) sc.T = *std::max_element(cfg.T_list.begin(), cfg.T_list.end());
    validate(sc, cfg.sym, cfg.grid);
}

void validate(const CoercivityStudyConfig& cfg) {
    if (cfg.N0s.empty()) throw InvalidParams("coercivity study needs an N0 ladder");
    if (cfg.n_calibration < 1 || cfg.n_test < 1) throw InvalidParams("sample counts must be positive");
    if (cfg.amplitudes.size() != 2 || !(cfg.amplitudes[0] > 0) ||
        !(cfg.amplitudes[1] >= cfg.amplitudes[0]))
        throw InvalidParams("amplitudes must be a positive range [lo, hi]");
    if (cfg.grid.K() > kMaxEnergyK) throw InvalidParams("K above the energy evaluation cap");
}

TruncationTable run_truncation_study(const TruncationConfig& cfg) {
    validate(cfg);
    const auto u0 = dealias(make_initial(cfg.grid, cfg.data));
    TruncationTable tab;
    tab.u0_norm = norm(u0, {cfg.s});
    tab.T_prime = short_time(tab.u0_norm, cfg.A1, cfg.beta1);

    SolverConfig sc;
    sc.T = tab.T_prime;
    sc.dt = std::min(cfg.dt, tab.T_prime);
    sc.scheme = cfg.scheme;

    // one trajectory per level, plus the full reference
    std::vector<int> runs(cfg.levels);
    if (cfg.include_full) runs.push_back(-1);
    std::vector<Trajectory> trs(runs.size());
    parallel_chunks(runs.size(), 1, [&](std::size_t c, std::size_t, std::size_t) {
        const int n = runs[c];
        const auto d = n < 0 ? u0 : project(u0, Projection::le(std::ldexp(1.0, n)));
        try {
            trs[c] = simulate(d, cfg.sym, sc);
        } catch (const NonFiniteState& e) {
            const std::string lab = n < 0 ? "full" : std::to_string(n);
            throw NonFiniteState(std::string(e.what()) + " at level " + lab, e.time());
        }
    });

    std::vector<double> ms, logd;
    double rmin = INFINITY, rmax = 0.0;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        TruncationRow r;
        r.m = runs[i];
        r.n = runs[i + 1];
        const auto& a = trs[i];
        const auto& b = trs[i + 1];
        for (std::size_t t = 0; t < a.fields.size(); ++t)
            r.diff = std::max(r.diff, norm(b.fields[t] - a.fields[t], {cfg.s}));
        r.tail = norm(project(u0, Projection::gt(std::ldexp(1.0, r.m))), {cfg.s});
        r.ratio = r.tail > 0 ? r.diff / r.tail : 0.0;
        if (r.tail > 0) {
            rmin = std::min(rmin, r.ratio);
            rmax = std::max(rmax, r.ratio);
        }
        if (r.diff > 0) {
            ms.push_back(r.m);
            logd.push_back(std::log2(r.diff));
        }
        tab.rows.push_back(r);
    }
    tab.decay_rate = ms.size() >= 2 ? -fit_line(ms, logd).slope : 0.0;
    tab.ratio_spread = rmax > 0 ? rmax / rmin : 0.0;
    return tab;
}

double hbar_norm(const SpectralField& w, double sigma) {
    return norm(w, {sigma, true, true});
}

LipschitzRow lipschitz_pair(const LipschitzConfig& cfg, const SpectralField& u0,
                            const SpectralField& p, double amplitude, double T_prime) {
    SolverConfig sc;
    sc.T = T_prime;
    sc.dt = std::min(cfg.dt, T_prime);
    sc.scheme = cfg.scheme;
    const auto v0 = dealias(u0 + amplitude * p);
    const auto a = simulate(dealias(u0), cfg.sym, sc);
    const auto b = simulate(v0, cfg.sym, sc);
    LipschitzRow r;
    r.amplitude = amplitude;
    r.d0 = hbar_norm(b.fields.front() - a.fields.front(), cfg.sigma);
    for (std::size_t t = 0; t < a.fields.size(); ++t)
        r.dmax = std::max(r.dmax, hbar_norm(b.fields[t] - a.fields[t], cfg.sigma));
    r.zero_difference = r.d0 == 0.0;
    r.ratio = r.zero_difference ? 0.0 : r.dmax / r.d0;
    return r;
}

LipschitzTable run_lipschitz_study(const LipschitzConfig& cfg) {
    validate(cfg);
    const auto u0 = dealias(make_initial(cfg.grid, cfg.data));
    LipschitzTable tab;
    tab.T_prime = short_time(norm(u0, {cfg.s}), cfg.A1, cfg.beta1);

    const int top = band_top(cfg.grid, cfg.data.kmax);
    const std::size_t ns = std::size_t(cfg.n_seeds), na = cfg.amplitudes.size();
    tab.rows.resize(ns * na);
    parallel_chunks(ns * na, 1, [&](std::size_t c, std::size_t, std::size_t) {
        const std::size_t si = c / na, ai = c % na;
        const std::uint64_t seed = cfg.seed + 1000003ULL * (si + 1);
        auto p = random_phases(cfg.grid, cfg.perturb_kmin, top, seed, [&](int k) {
            return std::pow(1.0 + double(k) * k, -0.5 * cfg.perturb_s - 0.25);
        });
        p *= 1.0 / hbar_norm(p, cfg.sigma);
        auto r = lipschitz_pair(cfg, u0, p, cfg.amplitudes[ai], tab.T_prime);
        r.seed = seed;
        tab.rows[c] = r;
    });
    tab.max_ratio_per_amplitude.assign(na, 0.0);
    for (std::size_t c = 0; c < tab.rows.size(); ++c)
        tab.max_ratio_per_amplitude[c % na] =
            std::max(tab.max_ratio_per_amplitude[c % na], tab.rows[c].ratio);
    const auto [lo, hi] = std::minmax_element(tab.max_ratio_per_amplitude.begin(),
                                              tab.max_ratio_per_amplitude.end());
    tab.uniformity = *lo > 0 ? *hi / *lo : INFINITY;
    return tab;
}

std::vector<ConservationRow> run_conservation_study(const ConservationConfig& cfg) {
    validate(cfg);
    struct Cell {
        std::size_t sym, K, dt;
    };
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < cfg.symbols.size(); ++a)
        for (std::size_t b = 0; b < cfg.Ks.size(); ++b)
            for (std::size_t c = 0; c < cfg.dts.size(); ++c) cells.push_back({a, b, c});
    std::vector<ConservationRow> rows(cells.size());
    parallel_chunks(cells.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
        const auto& cell = cells[i];
        const auto& sym = cfg.symbols[cell.sym];
        const TorusGrid g(cfg.Ks[cell.K]);
        SolverConfig sc;
        sc.T = cfg.T;
        sc.dt = cfg.dts[cell.dt];
        sc.scheme = cfg.scheme;
        sc.linear_only = cfg.linear_only;
        sc.snapshot_stride = 1 << 30;
        const auto tr = simulate(make_initial(g, cfg.data), sym, sc);
        ConservationRow r;
        r.symbol = sym.name();
        r.K = g.K();
        r.dt = sc.dt;
        r.mass_drift = sup_abs_diff(tr.mass) / std::fabs(tr.mass.front());
        r.ham_drift = sup_abs_diff(tr.hamiltonian) / std::fabs(tr.hamiltonian.front());
        rows[i] = r;
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (cells[i].dt == 0) continue;
        const auto& p = rows[i - 1];
        auto& r = rows[i];
        if (p.ham_drift > 0 && r.ham_drift > 0 && p.dt != r.dt)
            r.ham_order = std::log(p.ham_drift / r.ham_drift) / std::log(p.dt / r.dt);
    }
    return rows;
}

std::vector<EnergyStudyRow> run_energy_study(const EnergyStudyConfig& cfg) {
    validate(cfg);
    auto Ts = cfg.T_list.empty() ? std::vector<double>{cfg.solver.T} : cfg.T_list;
    std::sort(Ts.begin(), Ts.end());
    SolverConfig sc = cfg.solver;
    sc.T = Ts.back();
    sc.snapshot_stride = 1;
    const auto tr = simulate(make_initial(cfg.grid, cfg.data), cfg.sym, sc);

    std::vector<std::size_t> snaps;
    for (std::size_t t = 0; t < tr.fields.size(); ++t)
        if (t % std::size_t(cfg.monitor_stride) == 0 || t + 1 == tr.fields.size() ||
            std::find_if(Ts.begin(), Ts.end(), [&](double T) {
                return std::fabs(tr.times[t] - T) <= 1e-12 * T;
            }) != Ts.end())
            snaps.push_back(t);

    const std::size_t nN = cfg.N0s.size(), nS = snaps.size();
    // per (N0, snapshot): full energy, high energy, quadratic, gap
    std::vector<double> E(nN * nS), Eh(nN * nS), Q(nN * nS), G(nN * nS);
    parallel_chunks(nN * nS, 1, [&](std::size_t c, std::size_t, std::size_t) {
        const std::size_t a = c / nS, b = c % nS;
        const auto& u = tr.fields[snaps[b]];
        const double N0 = cfg.N0s[a];
        const double c3 = cubic_form(u, cfg.sym, cfg.s, N0);
        const double q = 0.5 * (norm_sq(u, {0.0}) + homogeneous_norm_sq(u, cfg.s));
        const double qh = 0.5 * homogeneous_norm_sq(project(u, Projection::gt(N0)), cfg.s);
        E[c] = q + c3 / 3.0;
        Eh[c] = qh + c3 / 3.0;
        Q[c] = q;
        const double n2 = norm_sq(u, {cfg.s});
        G[c] = n2 > 0 ? std::fabs(c3) / (3.0 * n2) : 0.0;
    });

    std::vector<EnergyStudyRow> rows;
    for (double T : Ts)
        for (std::size_t a = 0; a < nN; ++a) {
            EnergyStudyRow r;
            r.T = T;
            r.N0 = cfg.N0s[a];
            r.energy0 = E[a * nS];
            r.high0 = Eh[a * nS];
            for (std::size_t b = 0; b < nS; ++b) {
                if (tr.times[snaps[b]] > T * (1 + 1e-12)) break;
                const std::size_t c = a * nS + b;
                r.drift_energy = std::max(r.drift_energy, std::fabs(E[c] - E[a * nS]));
                r.drift_high = std::max(r.drift_high, std::fabs(Eh[c] - Eh[a * nS]));
                r.drift_quadratic = std::max(r.drift_quadratic, std::fabs(Q[c] - Q[a * nS]));
                r.max_gap = std::max(r.max_gap, G[c]);
            }
            rows.push_back(r);
        }
    return rows;
}

namespace {

struct Sample {
    SpectralField w, z;
};

std::vector<Sample> coercivity_samples(const CoercivityStudyConfig& cfg, int n,
                                       std::uint64_t seed, bool pairs) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(std::log(cfg.amplitudes[0]),
                                             std::log(cfg.amplitudes[1]));
    std::vector<Sample> out;
    for (int i = 0; i < n; ++i) {
        ProfileSpec p;
        p.s = cfg.data_s;
        p.amplitude = std::exp(U(rng));
        p.seed = rng();
        auto w = make_initial(cfg.grid, p);
        SpectralField z(cfg.grid);
        if (pairs) {
            p.amplitude = std::exp(U(rng));
            p.seed = rng();
            z = make_initial(cfg.grid, p);
        }
        out.push_back({std::move(w), std::move(z)});
    }
    return out;
}

template <class Check, class Scale>
CoercivityStudy coercivity_study(const CoercivityStudyConfig& cfg, bool pairs, Check check,
                                 Scale scale) {
    validate(cfg);
    CoercivityStudy st;
    st.N0s = cfg.N0s;
    std::sort(st.N0s.begin(), st.N0s.end());
    const double band = dealias_cutoff(cfg.grid, kDefaultDealias);

    // smallest N0 (dyadic, up to the band) from which the inequality holds
    const auto cal = coercivity_samples(cfg, cfg.n_calibration, cfg.seed, pairs);
    std::vector<double> c1(cal.size());
    parallel_chunks(cal.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
        double need = 1.0;
        for (double N0 = 1.0; N0 <= 2.0 * band; N0 *= 2.0)
            if (!check(cal[i], N0, 0.0).pass) need = 2.0 * N0;
        c1[i] = need / scale(cal[i]);
    });
    st.C1 = *std::max_element(c1.begin(), c1.end());

    const auto test = coercivity_samples(cfg, cfg.n_test, cfg.seed ^ 0x9e3779b97f4a7c15ULL, pairs);
    const std::size_t nN = st.N0s.size();
    std::vector<double> gaps(test.size() * nN);
    std::vector<int> pass(test.size());
    st.required_N0.resize(test.size());
    parallel_chunks(test.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
        const auto r = check(test[i], 1.0, st.C1);
        st.required_N0[i] = r.N0_required;
        pass[i] = check(test[i], r.N0_required, st.C1).pass;
        for (std::size_t a = 0; a < nN; ++a) gaps[i * nN + a] = check(test[i], st.N0s[a], st.C1).gap_ratio;
    });
    st.n_test = int(test.size());
    st.n_pass = int(std::count(pass.begin(), pass.end(), 1));
    st.max_gap.assign(nN, 0.0);
    for (std::size_t i = 0; i < test.size(); ++i)
        for (std::size_t a = 0; a < nN; ++a) st.max_gap[a] = std::max(st.max_gap[a], gaps[i * nN + a]);
    return st;
}

}  // namespace

CoercivityStudy run_coercivity_study(const CoercivityStudyConfig& cfg) {
    const double a = cfg.sym.alpha();
    const double st = s_tilde_alpha(a);
    return coercivity_study(
        cfg, false,
        [&](const Sample& x, double N0, double C1) { return coercivity_check(x.w, cfg.sym, cfg.s, N0, C1); },
        [&](const Sample& x) { return std::pow(1.0 + norm(x.w, {st}), 2.0 / a); });
}

CoercivityStudy run_difference_coercivity_study(const CoercivityStudyConfig& cfg) {
    return coercivity_study(
        cfg, true,
        [&](const Sample& x, double N0, double C1) {
            return difference_coercivity_check(x.w, x.z, cfg.sym, cfg.sigma, cfg.s_z, N0, C1);
        },
        [&](const Sample& x) { return std::pow(1.0 + norm(x.z, {cfg.s_z}), 2.0); });
}

bool non_increasing(const std::vector<double>& v, double slack, double abs_floor) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= abs_floor && v[i - 1] <= abs_floor) continue;
        if (v[i] > (1.0 + slack) * v[i - 1] && v[i] > abs_floor) return false;
    }
    return true;
}

}  // namespace nlb
