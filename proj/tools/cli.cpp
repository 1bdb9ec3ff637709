#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nlb/errors.hpp"
#include "nlb/io.hpp"
#include "nlb/numeric.hpp"

namespace nlb::cli {

namespace fs = std::filesystem;

namespace {

struct Run {
    std::string cmd;
    json cfg;
    fs::path base;     // directory of the config file
    fs::path out_dir;
    bool dry = false;
    std::ostream* out = nullptr;
};

template <class T>
T get(const json& j, const char* key, T def, const std::string& where) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for " + where + "." + key + ": " + e.what());
    }
}

json section(const json& cfg, const char* name) {
    if (!cfg.contains(name)) return json::object();
    if (!cfg[name].is_object()) throw ConfigError(std::string(name) + " must be an object");
    return cfg[name];
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::uint64_t seed_of(const Run& r) { return get<std::uint64_t>(r.cfg, "seed", 1, "config"); }

DispersiveSymbol parse_symbol(const Run& r) {
    if (!r.cfg.contains("symbol")) throw ConfigError("symbol section is required");
    return symbol_from_json(r.cfg["symbol"]);
}

fs::path input_path(const Run& r, const std::string& s) {
    fs::path p(s);
    return p.is_absolute() ? p : r.base / p;
}

TorusGrid parse_grid(const Run& r, int default_K = 256) {
    const json g = section(r.cfg, "grid");
    reject_unknown_keys(g, {"K", "L"}, "grid");
    const int K = get<int>(g, "K", default_K, "grid");
    const double L = get<double>(g, "L", 2.0 * std::numbers::pi, "grid");
    if (K < 4 || K % 2 != 0) throw ConfigError("grid.K must be an even integer >= 4");
    if (!(L > 0)) throw ConfigError("grid.L must be positive");
    return TorusGrid(K, L);
}

SolverConfig parse_solver(const Run& r) {
    const json s = section(r.cfg, "solver");
    reject_unknown_keys(s, {"dt", "T", "scheme", "dealias_fraction", "snapshot_stride", "linear_only",
                            "cubic_sign", "norm_s"},
                        "solver");
    SolverConfig c;
    c.dt = get(s, "dt", c.dt, "solver");
    c.T = get(s, "T", c.T, "solver");
    c.scheme = scheme_from_string(get<std::string>(s, "scheme", to_string(c.scheme), "solver"));
    c.dealias_fraction = get(s, "dealias_fraction", c.dealias_fraction, "solver");
    c.snapshot_stride = get(s, "snapshot_stride", c.snapshot_stride, "solver");
    c.linear_only = get(s, "linear_only", c.linear_only, "solver");
    c.cubic_sign = get(s, "cubic_sign", c.cubic_sign, "solver");
    c.norm_s = get(s, "norm_s", c.norm_s, "solver");
    if (c.cubic_sign != 1 && c.cubic_sign != -1) throw ConfigError("solver.cubic_sign must be +1 or -1");
    return c;
}

json solver_json(const SolverConfig& c) {
    return {{"dt", c.dt}, {"T", c.T}, {"scheme", to_string(c.scheme)},
            {"dealias_fraction", c.dealias_fraction}, {"snapshot_stride", c.snapshot_stride},
            {"linear_only", c.linear_only}, {"cubic_sign", c.cubic_sign}, {"norm_s", c.norm_s}};
}

ProfileSpec parse_profile(const Run& r, const json& j, const std::string& where) {
    reject_unknown_keys(j, {"profile", "amplitude", "s", "kmax", "width", "modes", "seed"}, where);
    ProfileSpec p;
    p.profile = get(j, "profile", p.profile, where);
    p.amplitude = get(j, "amplitude", p.amplitude, where);
    p.s = get(j, "s", p.s, where);
    p.kmax = get(j, "kmax", p.kmax, where);
    p.width = get(j, "width", p.width, where);
    p.seed = get<std::uint64_t>(j, "seed", seed_of(r), where);
    if (j.contains("modes")) {
        if (!j["modes"].is_array()) throw ConfigError(where + ".modes must be an array");
        for (const auto& m : j["modes"]) {
            if (!m.is_array() || m.size() != 3 || !m[0].is_number_integer())
                throw ConfigError(where + ".modes entries must be [k, re, im]");
            p.modes.push_back({m[0].get<int>(), {m[1].get<double>(), m[2].get<double>()}});
        }
    }
    return p;
}

json profile_json(const ProfileSpec& p) {
    json m = json::array();
    for (const auto& [k, c] : p.modes) m.push_back({k, c.real(), c.imag()});
    return {{"profile", p.profile}, {"amplitude", p.amplitude}, {"s", p.s}, {"kmax", p.kmax},
            {"width", p.width},     {"modes", m},               {"seed", p.seed}};
}

// Field from input.<key> when present, otherwise from the initial profile.
struct Data {
    std::optional<SpectralField> field;
    json plan;
};

Data load_data(const Run& r, const TorusGrid& g, const std::string& key, bool allow_profile) {
    const json in = section(r.cfg, "input");
    reject_unknown_keys(in, {"field", "z_field"}, "input");
    Data d;
    if (in.contains(key)) {
        const auto p = input_path(r, get<std::string>(in, key.c_str(), "", "input"));
        d.plan = {{"file", p.string()}};
        if (!fs::exists(p)) throw ConfigError("input file not found: " + p.string());
        if (!r.dry) {
            d.field = read_field_csv(p, g.L());
            if (!(d.field->grid() == g))
                throw ConfigError("input." + key + " has K = " + std::to_string(d.field->grid().K()) +
                                  ", grid.K = " + std::to_string(g.K()));
        }
        return d;
    }
    if (!allow_profile) throw ConfigError("input." + key + " is required");
    const auto p = parse_profile(r, section(r.cfg, "initial"), "initial");
    validate(p, g);
    d.plan = profile_json(p);
    if (!r.dry) d.field = make_initial(g, p);
    return d;
}

// K of an input field, read from the file header count, so grid.K may be omitted.
int input_K(const Run& r, const std::string& key) {
    const json in = section(r.cfg, "input");
    if (!in.contains(key)) return 0;
    const auto p = input_path(r, get<std::string>(in, key.c_str(), "", "input"));
    if (!fs::exists(p)) throw ConfigError("input file not found: " + p.string());
    return read_field_csv(p).grid().K();
}

TorusGrid grid_for(const Run& r) {
    const int K = input_K(r, "field");
    const json g = section(r.cfg, "grid");
    if (K > 0 && !g.contains("K")) return parse_grid(r, K);
    return parse_grid(r);
}

void allow_sections(const Run& r, const std::vector<std::string>& names) {
    std::vector<std::string> keys(names);
    keys.push_back("io");
    keys.push_back("seed");
    reject_unknown_keys(r.cfg, keys, "config (" + r.cmd + ")");
}

json header(const Run& r) {
    return {{"version", version_string()}, {"subcommand", r.cmd}, {"config", r.cfg}};
}

int finish_plan(const Run& r, json plan, const std::vector<std::string>& outputs) {
    plan["subcommand"] = r.cmd;
    plan["output_dir"] = r.out_dir.string();
    plan["outputs"] = outputs;
    *r.out << plan.dump(2) << '\n';
    return kOk;
}

std::string sanitize(double v) {
    std::string s = fmt(v, 10);
    for (auto& c : s)
        if (c == '.') c = 'p';
        else if (c == '-') c = 'm';
    return s;
}

int cmd_simulate(const Run& r) {
    allow_sections(r, {"symbol", "grid", "solver", "initial", "input"});
    const auto sym = parse_symbol(r);
    const auto g = grid_for(r);
    const auto sc = parse_solver(r);
    validate(sc, sym, g);
    auto d = load_data(r, g, "field", true);
    std::vector<std::string> outs{"mass.csv", "hamiltonian.csv", "mean.csv", "snapshots/times.csv",
                                  "snapshots/field_<n>.csv", "summary.json"};
    for (double s : sc.norm_s) outs.push_back("norm_s" + sanitize(s) + ".csv");
    if (r.dry)
        return finish_plan(r, {{"symbol", symbol_to_json(sym)}, {"grid", {{"K", g.K()}, {"L", g.L()}}},
                               {"solver", solver_json(sc)}, {"data", d.plan}},
                           outs);

    const auto tr = simulate(*d.field, sym, sc);
    const auto& t = tr.monitor_times;
    write_series_csv(r.out_dir / "mass.csv", {"t", "value"}, {t, tr.mass});
    write_series_csv(r.out_dir / "hamiltonian.csv", {"t", "value"}, {t, tr.hamiltonian});
    write_series_csv(r.out_dir / "mean.csv", {"t", "value"}, {t, tr.mean_re});
    for (std::size_t i = 0; i < sc.norm_s.size(); ++i)
        write_series_csv(r.out_dir / ("norm_s" + sanitize(sc.norm_s[i]) + ".csv"), {"t", "value"},
                         {t, tr.norms[i]});
    std::vector<double> idx;
    for (std::size_t n = 0; n < tr.fields.size(); ++n) {
        std::ostringstream name;
        name << "field_" << std::setw(6) << std::setfill('0') << n << ".csv";
        write_field_csv(r.out_dir / "snapshots" / name.str(), tr.fields[n]);
        idx.push_back(double(n));
    }
    write_series_csv(r.out_dir / "snapshots" / "times.csv", {"index", "t"}, {idx, tr.times});
    auto drift = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x - v.front()));
        return v.front() != 0.0 ? m / std::fabs(v.front()) : m;
    };
    json summary = header(r);
    summary["result"] = {{"n_steps", t.size() - 1}, {"final_time", t.back()},
                         {"mass_drift_rel", drift(tr.mass)},
                         {"hamiltonian_drift_rel", drift(tr.hamiltonian)}};
    write_json(r.out_dir / "summary.json", summary);
    *r.out << "simulate: steps=" << t.size() - 1 << " mass_drift_rel=" << fmt(drift(tr.mass))
           << " hamiltonian_drift_rel=" << fmt(drift(tr.hamiltonian)) << '\n';
    return kOk;
}

struct VerifyJob {
    std::string kind;  // one_sided, omega3, omega4, exp_sum
    std::string id;
    std::string region;
    double s = 0, sigma = 0;
};

int cmd_verify(const Run& r) {
    allow_sections(r, {"symbol", "verify"});
    const auto sym = parse_symbol(r);
    const json v = section(r.cfg, "verify");
    reject_unknown_keys(v, {"n", "N_lo", "N_hi", "seed", "one_sided", "two_sided", "exp_sum"}, "verify");
    SamplerArgs base;
    base.n = get<std::size_t>(v, "n", base.n, "verify");
    base.N_lo = get(v, "N_lo", base.N_lo, "verify");
    base.N_hi = get(v, "N_hi", base.N_hi, "verify");
    base.seed = get<std::uint64_t>(v, "seed", seed_of(r), "verify");
    if (base.n < 2 || !(base.N_lo >= 1) || !(base.N_hi >= base.N_lo))
        throw ConfigError("verify needs n >= 2 and 1 <= N_lo <= N_hi");
    if (base.N_lo < 64.0 * sym.xi0() * (1 - 1e-12)) throw InvalidRange("verify.N_lo below 2^6 xi0");

    std::vector<VerifyJob> jobs;
    OneSidedOptions opt;
    double N0 = 1.0;
    const bool none = !v.contains("one_sided") && !v.contains("two_sided") && !v.contains("exp_sum");
    if (v.contains("one_sided") || none) {
        const json o = v.contains("one_sided") ? v["one_sided"] : json::object();
        reject_unknown_keys(o, {"estimates", "s", "sigma", "N0", "enforce_hypothesis"}, "verify.one_sided");
        std::vector<std::string> ids;
        if (!o.contains("estimates") || o["estimates"] == "all")
            for (const auto& e : estimate_table()) ids.push_back(e.id);
        else
            ids = get<std::vector<std::string>>(o, "estimates", {}, "verify.one_sided");
        const auto ss = get<std::vector<double>>(o, "s", {1.0}, "verify.one_sided");
        const auto sg = get<std::vector<double>>(o, "sigma", {-0.25}, "verify.one_sided");
        N0 = get(o, "N0", N0, "verify.one_sided");
        opt.enforce_hypothesis = get(o, "enforce_hypothesis", true, "verify.one_sided");
        for (const auto& id : ids) {
            estimate_info(id);
            if (id == "est-a4")
                for (double s : ss) jobs.push_back({"one_sided", id, "", s, sg.front()});
            else
                for (double x : sg) jobs.push_back({"one_sided", id, "", ss.front(), x});
        }
    }
    if (v.contains("two_sided") || none) {
        const json t = v.contains("two_sided")
                           ? v["two_sided"]
                           : json{{"omega3", {"sim", "ll"}},
                                  {"omega4", {"A", "B1", "B2", "C1", "C2", "C3", "C4"}}};
        reject_unknown_keys(t, {"omega3", "omega4"}, "verify.two_sided");
        for (const auto& reg : get<std::vector<std::string>>(t, "omega3", {}, "verify.two_sided")) {
            if (reg != "sim" && reg != "ll" && reg != "global")
                throw ConfigError("omega3 regime must be sim, ll or global");
            jobs.push_back({"omega3", "omega3", reg});
        }
        for (const auto& reg : get<std::vector<std::string>>(t, "omega4", {}, "verify.two_sided")) {
            if (reg != "global") region_from_string(reg);
            jobs.push_back({"omega4", "omega4", reg});
        }
    }
    std::vector<int> Ns;
    int n_t = 64, n_x = 4096;
    if (v.contains("exp_sum")) {
        const json e = v["exp_sum"];
        reject_unknown_keys(e, {"Ns", "n_t", "n_x"}, "verify.exp_sum");
        Ns = get<std::vector<int>>(e, "Ns", {64, 128, 256, 512, 1024}, "verify.exp_sum");
        n_t = get(e, "n_t", n_t, "verify.exp_sum");
        n_x = get(e, "n_x", n_x, "verify.exp_sum");
        if (Ns.empty() || n_t < 2 || n_x < 8) throw ConfigError("exp_sum needs Ns, n_t >= 2 and n_x >= 8");
        for (int N : Ns)
            if (N < 2) throw ConfigError("exp_sum Ns must be >= 2");
        jobs.push_back({"exp_sum", "exp-sum", "global"});
    }
    // preconditions before any sampling
    for (const auto& j : jobs)
        if (j.kind == "one_sided" && opt.enforce_hypothesis)
            check_estimate_hypothesis({sym, j.s, j.sigma, N0}, j.id);

    if (r.dry) {
        json plan{{"symbol", symbol_to_json(sym)},
                  {"n", base.n}, {"N_lo", base.N_lo}, {"N_hi", base.N_hi}, {"seed", base.seed}};
        json list = json::array();
        for (const auto& j : jobs)
            list.push_back({{"kind", j.kind}, {"id", j.id}, {"region", j.region}, {"s", j.s},
                            {"sigma", j.sigma}});
        plan["jobs"] = list;
        return finish_plan(r, plan, {"report.json"});
    }

    json reports = json::array();
    bool all = true;
    for (const auto& j : jobs) {
        BoundReport rep;
        SamplerArgs a = base;
        if (j.kind == "one_sided") {
            a.region = "default";
            rep = verify_one_sided({sym, j.s, j.sigma, N0}, j.id, a, opt);
        } else if (j.kind == "omega3") {
            a.region = j.region;
            rep = verify_two_sided(sym, Quantity::omega3, a);
        } else if (j.kind == "omega4") {
            a.region = j.region;
            rep = verify_two_sided(sym, Quantity::omega4, a);
        } else {
            rep = verify_exp_sum(sym, Ns, n_t, n_x);
        }
        auto jr = to_json(rep);
        if (j.kind == "one_sided") jr["params"] = {{"s", j.s}, {"sigma", j.sigma}, {"N0", N0}};
        reports.push_back(jr);
        all = all && rep.pass;
        *r.out << (rep.pass ? "PASS " : "FAIL ") << rep.estimate_id << " region=" << rep.region;
        if (j.kind == "one_sided") *r.out << " s=" << fmt(j.s) << " sigma=" << fmt(j.sigma);
        *r.out << " inf=" << fmt(rep.inf_ratio) << " sup=" << fmt(rep.sup_ratio)
               << " slope=" << fmt(rep.trend_slope) << '\n';
    }
    json doc = header(r);
    doc["pass"] = all;
    doc["reports"] = reports;
    write_json(r.out_dir / "report.json", doc);
    return all ? kOk : kVerifyFailed;
}

CoercivityStudyConfig parse_coercivity(const Run& r, const json& e, const DispersiveSymbol& sym,
                                       const TorusGrid& g) {
    CoercivityStudyConfig c;
    c.sym = sym;
    c.grid = g;
    c.s = get(e, "s", c.s, "energy");
    c.sigma = get(e, "sigma", c.sigma, "energy");
    c.s_z = get(e, "s_z", c.s_z, "energy");
    c.amplitudes = get(e, "amplitudes", c.amplitudes, "energy");
    c.data_s = get(e, "data_s", c.data_s, "energy");
    c.n_calibration = get(e, "n_calibration", c.n_calibration, "energy");
    c.n_test = get(e, "n_test", c.n_test, "energy");
    c.N0s = get(e, "N0_list", c.N0s, "energy");
    c.seed = seed_of(r);
    validate(c);
    return c;
}

int cmd_energy(const Run& r) {
    allow_sections(r, {"symbol", "grid", "energy", "input", "initial"});
    const auto sym = parse_symbol(r);
    const auto g = grid_for(r);
    const json e = section(r.cfg, "energy");
    reject_unknown_keys(e, {"kind", "s", "sigma", "s_z", "N0", "C1", "amplitudes", "data_s",
                            "n_calibration", "n_test", "N0_list"},
                        "energy");
    const std::string kind = get<std::string>(e, "kind", "modified", "energy");
    if (g.K() > kMaxEnergyK) throw ConfigError("grid.K above the energy evaluation cap");

    if (kind == "coercivity-study" || kind == "difference-coercivity-study") {
        const auto c = parse_coercivity(r, e, sym, g);
        if (r.dry)
            return finish_plan(r, {{"symbol", symbol_to_json(sym)}, {"kind", kind}, {"K", g.K()}},
                               {"coercivity_study.json", "coercivity_gap.csv"});
        const auto st = kind == "coercivity-study" ? run_coercivity_study(c)
                                                   : run_difference_coercivity_study(c);
        json doc = header(r);
        doc["result"] = to_json(st);
        write_json(r.out_dir / "coercivity_study.json", doc);
        write_series_csv(r.out_dir / "coercivity_gap.csv", {"N0", "max_gap"}, {st.N0s, st.max_gap});
        *r.out << kind << ": C1=" << fmt(st.C1) << " pass=" << st.n_pass << "/" << st.n_test << '\n';
        return st.n_pass == st.n_test ? kOk : kVerifyFailed;
    }
    if (kind != "modified" && kind != "high" && kind != "difference")
        throw ConfigError("energy.kind must be modified, high, difference, coercivity-study or "
                          "difference-coercivity-study");
    const double s = get(e, "s", 1.0, "energy");
    const double sigma = get(e, "sigma", -0.25, "energy");
    const double N0 = get(e, "N0", 1.0, "energy");
    const bool has_c1 = e.contains("C1");
    const double C1 = get(e, "C1", 1.0, "energy");
    if (!(N0 > 0)) throw ConfigError("energy.N0 must be positive");
    if (kind == "difference" && !(sigma > -0.5 && sigma < 0))
        throw InvalidParams("energy.sigma must lie in (-1/2, 0)");

    auto w = load_data(r, g, "field", kind != "difference");
    Data z;
    if (kind == "difference") z = load_data(r, g, "z_field", false);
    if (r.dry)
        return finish_plan(r, {{"symbol", symbol_to_json(sym)}, {"kind", kind}, {"s", s},
                               {"sigma", sigma}, {"N0", N0}, {"data", w.plan}},
                           {"energy.json"});

    json doc = header(r);
    int code = kOk;
    if (kind == "difference") {
        doc["breakdown"] = to_json(difference_energy(*w.field, *z.field, sym, sigma, N0));
        if (has_c1) {
            const auto c = difference_coercivity_check(*w.field, *z.field, sym, sigma, s, N0, C1);
            doc["coercivity"] = to_json(c);
            if (c.in_hypothesis && !c.pass) code = kVerifyFailed;
        }
    } else {
        const auto b = kind == "modified" ? modified_energy(*w.field, sym, s, N0)
                                          : high_freq_energy(*w.field, sym, s, N0);
        doc["breakdown"] = to_json(b);
        if (has_c1 && kind == "modified") {
            const auto c = coercivity_check(*w.field, sym, s, N0, C1);
            doc["coercivity"] = to_json(c);
            if (c.in_hypothesis && !c.pass) code = kVerifyFailed;
        }
    }
    write_json(r.out_dir / "energy.json", doc);
    *r.out << doc["breakdown"].dump() << '\n';
    return code;
}

int cmd_energy_drift(const Run& r) {
    allow_sections(r, {"symbol", "grid", "solver", "initial", "input", "energy"});
    const auto sym = parse_symbol(r);
    const auto g = grid_for(r);
    auto sc = parse_solver(r);
    validate(sc, sym, g);
    const json e = section(r.cfg, "energy");
    reject_unknown_keys(e, {"kind", "s", "N0_list", "monitor_stride"}, "energy");
    const std::string kind = get<std::string>(e, "kind", "modified", "energy");
    if (kind != "modified" && kind != "high") throw ConfigError("energy.kind must be modified or high");
    const double s = get(e, "s", 1.0, "energy");
    const auto N0s = get<std::vector<double>>(e, "N0_list", {16, 32, 64, 128, 256}, "energy");
    const int stride = get(e, "monitor_stride", 1, "energy");
    if (N0s.empty() || stride < 1) throw ConfigError("energy needs a non-empty N0_list and stride >= 1");
    for (double N0 : N0s)
        if (!(N0 > 0)) throw ConfigError("N0 values must be positive");
    if (g.K() > kMaxEnergyK) throw ConfigError("grid.K above the energy evaluation cap");
    auto d = load_data(r, g, "field", true);
    std::vector<std::string> outs{"energy_drift_summary.csv", "energy_drift.json"};
    for (double N0 : N0s) outs.push_back("energy_drift_N0_" + sanitize(N0) + ".csv");
    if (r.dry)
        return finish_plan(r, {{"symbol", symbol_to_json(sym)}, {"solver", solver_json(sc)},
                               {"kind", kind}, {"s", s}, {"N0_list", N0s}, {"data", d.plan}},
                           outs);

    sc.snapshot_stride = stride;
    const auto tr = simulate(*d.field, sym, sc);
    std::vector<double> drift, dq, gap;
    for (double N0 : N0s) {
        std::vector<double> E(tr.fields.size()), E2(E.size()), E3(E.size());
        double g_max = 0.0;
        for (std::size_t n = 0; n < tr.fields.size(); ++n) {
            const auto b = kind == "modified" ? modified_energy(tr.fields[n], sym, s, N0)
                                              : high_freq_energy(tr.fields[n], sym, s, N0);
            E[n] = b.total;
            E2[n] = b.quadratic;
            E3[n] = b.coefficient * b.cubic;
            const double n2 = norm_sq(tr.fields[n], {s});
            if (n2 > 0) g_max = std::max(g_max, std::fabs(E3[n]) / n2);
        }
        write_series_csv(r.out_dir / ("energy_drift_N0_" + sanitize(N0) + ".csv"),
                         {"t", "E", "E2", "E3"}, {tr.times, E, E2, E3});
        double a = 0.0, b = 0.0;
        for (std::size_t n = 0; n < E.size(); ++n) {
            a = std::max(a, std::fabs(E[n] - E[0]));
            b = std::max(b, std::fabs(E2[n] - E2[0]));
        }
        drift.push_back(a);
        dq.push_back(b);
        gap.push_back(g_max);
    }
    write_series_csv(r.out_dir / "energy_drift_summary.csv",
                     {"N0", "drift", "drift_quadratic", "max_gap"}, {N0s, drift, dq, gap});
    json doc = header(r);
    doc["result"] = {{"N0", N0s}, {"drift", drift}, {"drift_quadratic", dq}, {"max_gap", gap},
                     {"non_increasing_5pct", non_increasing(drift, 0.05)}};
    write_json(r.out_dir / "energy_drift.json", doc);
    for (std::size_t i = 0; i < N0s.size(); ++i)
        *r.out << "N0=" << fmt(N0s[i]) << " drift=" << fmt(drift[i]) << '\n';
    return kOk;
}

int cmd_convergence(const Run& r) {
    allow_sections(r, {"symbol", "grid", "initial", "experiment"});
    TruncationConfig c;
    c.sym = parse_symbol(r);
    c.grid = parse_grid(r, 1024);
    c.data = parse_profile(r, section(r.cfg, "initial"), "initial");
    const json e = section(r.cfg, "experiment");
    reject_unknown_keys(e, {"levels", "include_full", "A1", "beta1", "s", "dt", "scheme"}, "experiment");
    c.levels = get(e, "levels", c.levels, "experiment");
    c.include_full = get(e, "include_full", c.include_full, "experiment");
    c.A1 = get(e, "A1", c.A1, "experiment");
    c.beta1 = get(e, "beta1", c.beta1, "experiment");
    c.s = get(e, "s", c.s, "experiment");
    c.dt = get(e, "dt", c.dt, "experiment");
    c.scheme = scheme_from_string(get<std::string>(e, "scheme", to_string(c.scheme), "experiment"));
    validate(c);
    if (r.dry)
        return finish_plan(r, {{"symbol", symbol_to_json(c.sym)}, {"K", c.grid.K()},
                               {"data", profile_json(c.data)}, {"levels", c.levels}, {"s", c.s},
                               {"A1", c.A1}, {"beta1", c.beta1}, {"dt", c.dt}},
                           {"truncation.csv", "truncation.json"});
    const auto t = run_truncation_study(c);
    std::vector<std::vector<std::string>> rows;
    for (const auto& x : t.rows)
        rows.push_back({std::to_string(x.m), x.n < 0 ? "full" : std::to_string(x.n), fmt(x.diff, 17),
                        fmt(x.tail, 17), fmt(x.ratio, 17)});
    write_rows_csv(r.out_dir / "truncation.csv", {"m", "n", "diff", "tail", "ratio"}, rows);
    json doc = header(r);
    doc["result"] = to_json(t);
    write_json(r.out_dir / "truncation.json", doc);
    *r.out << "convergence: T'=" << fmt(t.T_prime) << " decay_rate=" << fmt(t.decay_rate)
           << " ratio_spread=" << fmt(t.ratio_spread) << '\n';
    return kOk;
}

int cmd_lipschitz(const Run& r) {
    allow_sections(r, {"symbol", "grid", "initial", "experiment"});
    LipschitzConfig c;
    c.sym = parse_symbol(r);
    c.grid = parse_grid(r, 1024);
    c.data = parse_profile(r, section(r.cfg, "initial"), "initial");
    const json e = section(r.cfg, "experiment");
    reject_unknown_keys(e, {"s", "sigma", "amplitudes", "n_seeds", "perturb_kmin", "perturb_s", "A1",
                            "beta1", "dt", "scheme", "enforce_window"},
                        "experiment");
    c.s = get(e, "s", c.s, "experiment");
    c.sigma = get(e, "sigma", c.sigma, "experiment");
    c.amplitudes = get(e, "amplitudes", c.amplitudes, "experiment");
    c.n_seeds = get(e, "n_seeds", c.n_seeds, "experiment");
    c.perturb_kmin = get(e, "perturb_kmin", c.perturb_kmin, "experiment");
    c.perturb_s = get(e, "perturb_s", c.perturb_s, "experiment");
    c.A1 = get(e, "A1", c.A1, "experiment");
    c.beta1 = get(e, "beta1", c.beta1, "experiment");
    c.dt = get(e, "dt", c.dt, "experiment");
    c.scheme = scheme_from_string(get<std::string>(e, "scheme", to_string(c.scheme), "experiment"));
    c.enforce_window = get(e, "enforce_window", c.enforce_window, "experiment");
    c.seed = seed_of(r);
    validate(c);
    if (r.dry)
        return finish_plan(r, {{"symbol", symbol_to_json(c.sym)}, {"K", c.grid.K()},
                               {"data", profile_json(c.data)}, {"s", c.s}, {"sigma", c.sigma},
                               {"amplitudes", c.amplitudes}, {"n_seeds", c.n_seeds}},
                           {"lipschitz.csv", "lipschitz.json"});
    const auto t = run_lipschitz_study(c);
    std::vector<std::vector<std::string>> rows;
    for (const auto& x : t.rows)
        rows.push_back({fmt(x.amplitude, 17), std::to_string(x.seed), fmt(x.d0, 17), fmt(x.dmax, 17),
                        fmt(x.ratio, 17), x.zero_difference ? "1" : "0"});
    write_rows_csv(r.out_dir / "lipschitz.csv",
                   {"amplitude", "seed", "d0", "dmax", "ratio", "zero_difference"}, rows);
    json doc = header(r);
    doc["result"] = to_json(t);
    write_json(r.out_dir / "lipschitz.json", doc);
    *r.out << "lipschitz: T'=" << fmt(t.T_prime) << " uniformity=" << fmt(t.uniformity) << '\n';
    return kOk;
}

int cmd_conservation(const Run& r) {
    allow_sections(r, {"initial", "experiment"});
    ConservationConfig c;
    c.data = parse_profile(r, section(r.cfg, "initial"), "initial");
    const json e = section(r.cfg, "experiment");
    reject_unknown_keys(e, {"symbols", "Ks", "dts", "T", "scheme", "linear_only"}, "experiment");
    if (e.contains("symbols")) {
        if (!e["symbols"].is_array()) throw ConfigError("experiment.symbols must be an array");
        c.symbols.clear();
        for (const auto& s : e["symbols"]) c.symbols.push_back(symbol_from_json(s));
    }
    c.Ks = get(e, "Ks", c.Ks, "experiment");
    c.dts = get(e, "dts", c.dts, "experiment");
    c.T = get(e, "T", c.T, "experiment");
    c.scheme = scheme_from_string(get<std::string>(e, "scheme", to_string(c.scheme), "experiment"));
    c.linear_only = get(e, "linear_only", c.linear_only, "experiment");
    for (int K : c.Ks)
        if (K < 4 || K % 2) throw ConfigError("experiment.Ks must be even integers >= 4");
    validate(c);
    if (r.dry) {
        json syms = json::array();
        for (const auto& s : c.symbols) syms.push_back(symbol_to_json(s));
        return finish_plan(r, {{"symbols", syms}, {"Ks", c.Ks}, {"dts", c.dts}, {"T", c.T},
                               {"data", profile_json(c.data)}},
                           {"conservation.csv", "conservation.json"});
    }
    const auto rows = run_conservation_study(c);
    std::vector<std::vector<std::string>> cells;
    json arr = json::array();
    for (const auto& x : rows) {
        cells.push_back({x.symbol, std::to_string(x.K), fmt(x.dt, 17), fmt(x.mass_drift, 17),
                         fmt(x.ham_drift, 17), fmt(x.ham_order, 17)});
        arr.push_back(to_json(x));
        *r.out << x.symbol << " K=" << x.K << " dt=" << fmt(x.dt) << " mass_drift=" << fmt(x.mass_drift)
               << " ham_drift=" << fmt(x.ham_drift) << '\n';
    }
    write_rows_csv(r.out_dir / "conservation.csv",
                   {"symbol", "K", "dt", "mass_drift", "ham_drift", "ham_order"}, cells);
    json doc = header(r);
    doc["result"] = arr;
    write_json(r.out_dir / "conservation.json", doc);
    return kOk;
}

int exit_for(const std::string& code) {
    if (code == "NonFiniteState" || code == "ResonantDivision" || code == "DerivativeSingularity")
        return kNumerical;
    return kUsage;
}

void report(std::ostream& err, const std::string& code, int exit, const std::string& msg) {
    err << "error code=" << code << " exit=" << exit << " msg=" << json(msg).dump() << '\n';
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"nlb: dispersive-equation energy and solver toolkit"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", version_string());
    std::string config;
    bool dry = false;
    int threads = 0;
    double alpha = 0.0;
    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"simulate", "run the pseudo-spectral solver and write monitors and snapshots"},
        {"verify", "run symbol-bound verification and write a JSON report"},
        {"energy", "evaluate a modified, high-frequency or difference energy"},
        {"energy-drift", "track modified energies along a simulation for a list of N0"},
        {"convergence", "truncated-data Cauchy study"},
        {"lipschitz", "difference growth in the weighted negative norm"},
        {"conservation", "mass and hamiltonian drift against dt and K"},
        {"thresholds", "print the regularity thresholds for a given alpha"}};
    for (const auto& [name, desc] : cmds) {
        auto* sc = app.add_subcommand(name, desc);
        if (name == "thresholds") {
            sc->add_option("--alpha", alpha, "dispersion exponent in (0, 1]")->required();
            continue;
        }
        sc->add_option("--config", config, "JSON run configuration")->required();
        sc->add_flag("--dry-run", dry, "validate and print the resolved plan");
        sc->add_option("--threads", threads, "worker threads (default: hardware)");
    }

    std::vector<std::string> owned{"nlb"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : owned) argv.push_back(s.data());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        report(err, "UsageError", kUsage, e.what());
        return kUsage;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "thresholds") {
            out << std::setprecision(15) << "s_alpha=" << s_alpha(alpha) << '\n'
                << "s_tilde_alpha=" << s_tilde_alpha(alpha) << '\n';
            return kOk;
        }
        if (threads < 0) throw ConfigError("--threads must be non-negative");
        set_num_threads(threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency())));

        Run r;
        r.cmd = cmd;
        r.cfg = read_json(config);
        if (!r.cfg.is_object()) throw ConfigError("config root must be an object");
        r.base = fs::path(config).parent_path();
        const json io = section(r.cfg, "io");
        reject_unknown_keys(io, {"output_dir"}, "io");
        r.out_dir = fs::path(get<std::string>(io, "output_dir", "nlb_out", "io"));
        r.dry = dry;
        r.out = &out;

        if (cmd == "simulate") return cmd_simulate(r);
        if (cmd == "verify") return cmd_verify(r);
        if (cmd == "energy") return cmd_energy(r);
        if (cmd == "energy-drift") return cmd_energy_drift(r);
        if (cmd == "convergence") return cmd_convergence(r);
        if (cmd == "lipschitz") return cmd_lipschitz(r);
        if (cmd == "conservation") return cmd_conservation(r);
        throw ConfigError("unknown subcommand " + cmd);
    } catch (const NonFiniteState& e) {
        report(err, e.code(), kNumerical, std::string(e.what()) + " (t=" + fmt(e.time()) + ")");
        return kNumerical;
    } catch (const Error& e) {
        const int x = exit_for(e.code());
        report(err, e.code(), x, e.what());
        return x;
    } catch (const json::exception& e) {
        report(err, "ConfigError", kUsage, e.what());
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        report(err, "IOError", kUsage, e.what());
        return kUsage;
    } catch (const std::exception& e) {
        report(err, "InternalError", kNumerical, e.what());
        return kNumerical;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace nlb::cli
