#include "nlb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nlb/errors.hpp"

#ifndef NLB_VERSION_STRING
#define NLB_VERSION_STRING "unknown"
#endif

namespace nlb {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw InvalidInput("cannot open for writing: " + path.string());
    os << std::setprecision(17);
    return os;
}

double parse_double(const std::string& s, const std::string& ctx) {
    double v = 0.0;
    const char* b = s.data();
    const auto r = std::from_chars(b, b + s.size(), v);
    if (r.ec != std::errc() || r.ptr != b + s.size())
        throw FormatError("not a number in " + ctx + ": '" + s + "'");
    return v;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string version_string() { return NLB_VERSION_STRING; }

void write_field_csv(const std::filesystem::path& path, const SpectralField& f) {
    auto os = open_out(path);
    os << "k,re,im\n";
    const int K = f.grid().K();
    for (int k = -K / 2; k < K / 2; ++k) {
        const cplx c = f.at_mode(k);
        os << k << ',' << c.real() << ',' << c.imag() << '\n';
    }
}

SpectralField read_field_csv(const std::filesystem::path& path, double L, double tol) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open field file: " + path.string());
    std::string line;
    if (!std::getline(is, line) || trim(line) != "k,re,im")
        throw FormatError("field file must start with the header k,re,im");
    std::vector<std::pair<long, cplx>> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(trim(tok));
        const std::string ctx = "line " + std::to_string(lineno);
        if (parts.size() != 3) throw FormatError("expected 3 columns on " + ctx);
        long k = 0;
        const auto* b = parts[0].data();
        const auto res = std::from_chars(b, b + parts[0].size(), k);
        if (res.ec != std::errc() || res.ptr != b + parts[0].size())
            throw FormatError("bad mode index on " + ctx);
        rows.push_back({k, {parse_double(parts[1], ctx), parse_double(parts[2], ctx)}});
    }
    const int K = int(rows.size());
    if (K < 2 || K % 2 != 0) throw FormatError("field file needs an even number (>= 2) of modes");
    const TorusGrid g(K, L);
    SpectralField f(g);
    std::vector<char> seen(std::size_t(K), 0);
    for (const auto& [k, c] : rows) {
        if (k < -K / 2 || k >= K / 2) throw FormatError("mode " + std::to_string(k) + " outside the grid");
        const int idx = g.index(int(k));
        if (seen[std::size_t(idx)]) throw FormatError("duplicated mode " + std::to_string(k));
        seen[std::size_t(idx)] = 1;
        f[idx] = c;
    }
    if (f.hermitian_defect() > tol) throw FormatError("coefficients are not Hermitian symmetric");
    return f;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw InvalidInput("header and column counts differ");
    std::size_t n = 0;
    for (const auto& c : columns) n = std::max(n, c.size());
    for (const auto& c : columns)
        if (c.size() != n) throw InvalidInput("columns have different lengths");
    auto os = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i][r];
        os << '\n';
    }
}

void write_rows_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    auto os = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw InvalidInput("row width differs from the header");
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path.string());
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown key '" + k + "' in " + where);
}

DispersiveSymbol symbol_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "alpha", "tau", "delta", "xi0"}, "symbol");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("symbol.kind is required");
    const std::string kind = j["kind"];
    auto only = [&](const std::string& key) {
        for (const char* k : {"alpha", "tau", "delta"})
            if (k != key && j.contains(k))
                throw ConfigError("key '" + std::string(k) + "' does not apply to symbol " + kind);
    };
    try {
        const double xi0 = j.value("xi0", 1.0);
        if (kind == "fkdv") {
            only("alpha");
            if (!j.contains("alpha")) throw ConfigError("symbol.alpha is required for fkdv");
            return DispersiveSymbol::fkdv(j["alpha"].get<double>(), xi0);
        }
        if (kind == "whitham") {
            only("tau");
            return DispersiveSymbol::whitham(j.value("tau", 1.0), xi0);
        }
        if (kind == "ilw") {
            only("delta");
            return DispersiveSymbol::ilw(j.value("delta", 1.0), xi0);
        }
        if (kind == "smith") {
            only("");
            return DispersiveSymbol::smith(xi0);
        }
    } catch (const json::type_error& e) {
        throw ConfigError(std::string("bad symbol parameter: ") + e.what());
    }
    throw ConfigError("unknown symbol kind: " + kind);
}

json symbol_to_json(const DispersiveSymbol& sym) {
    json j{{"kind", to_string(sym.kind())}, {"xi0", sym.xi0()}};
    switch (sym.kind()) {
        case SymbolKind::fkdv: j["alpha"] = sym.alpha(); break;
        case SymbolKind::whitham: j["tau"] = sym.param(); break;
        case SymbolKind::ilw: j["delta"] = sym.param(); break;
        default: break;
    }
    return j;
}

json to_json(const BoundReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"xi", x.xi}, {"ratio", num(x.ratio)}});
    return {{"estimate_id", r.estimate_id}, {"region", r.region},
            {"n_samples", r.n_samples},     {"inf_ratio", num(r.inf_ratio)},
            {"sup_ratio", num(r.sup_ratio)}, {"trend_slope", num(r.trend_slope)},
            {"two_sided", r.two_sided},     {"pass", r.pass},
            {"violations", v}};
}

json to_json(const EnergyBreakdown& e) {
    return {{"quadratic", num(e.quadratic)},
            {"quadratic_low", num(e.quadratic_low)},
            {"quadratic_high", num(e.quadratic_high)},
            {"cubic", num(e.cubic)},
            {"coefficient", e.coefficient},
            {"total", num(e.total)},
            {"cubic_imag_rel", num(e.cubic_imag_rel)},
            {"s_or_sigma", e.s_or_sigma},
            {"N0", e.N0}};
}

json to_json(const CoercivityResult& r) {
    return {{"lhs", num(r.lhs)},          {"rhs", num(r.rhs)},
            {"gap_ratio", num(r.gap_ratio)}, {"N0_required", num(r.N0_required)},
            {"pass", r.pass},             {"in_hypothesis", r.in_hypothesis}};
}

json to_json(const TruncationTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"m", r.m}, {"n", r.n}, {"diff", num(r.diff)}, {"tail", num(r.tail)},
                        {"ratio", num(r.ratio)}});
    return {{"T_prime", t.T_prime},
            {"u0_norm", t.u0_norm},
            {"decay_rate", num(t.decay_rate)},
            {"ratio_spread", num(t.ratio_spread)},
            {"rows", rows}};
}

json to_json(const LipschitzTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"amplitude", r.amplitude}, {"seed", r.seed}, {"d0", num(r.d0)},
                        {"dmax", num(r.dmax)}, {"ratio", num(r.ratio)},
                        {"zero_difference", r.zero_difference}});
    json m = json::array();
    for (double x : t.max_ratio_per_amplitude) m.push_back(num(x));
    return {{"T_prime", t.T_prime}, {"max_ratio_per_amplitude", m},
            {"uniformity", num(t.uniformity)}, {"rows", rows}};
}

json to_json(const ConservationRow& r) {
    return {{"symbol", r.symbol}, {"K", r.K}, {"dt", r.dt}, {"mass_drift", num(r.mass_drift)},
            {"ham_drift", num(r.ham_drift)}, {"ham_order", num(r.ham_order)}};
}

json to_json(const EnergyStudyRow& r) {
    return {{"T", r.T},
            {"N0", r.N0},
            {"drift_energy", num(r.drift_energy)},
            {"drift_high", num(r.drift_high)},
            {"drift_quadratic", num(r.drift_quadratic)},
            {"max_gap", num(r.max_gap)},
            {"energy0", num(r.energy0)},
            {"high0", num(r.high0)}};
}

json to_json(const CoercivityStudy& s) {
    json g = json::array();
    for (double x : s.max_gap) g.push_back(num(x));
    return {{"C1", num(s.C1)}, {"N0s", s.N0s}, {"max_gap", g},
            {"n_test", s.n_test}, {"n_pass", s.n_pass}, {"required_N0", s.required_N0}};
}

}  // namespace nlb
