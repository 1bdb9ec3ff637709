#include "nlb/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlb/errors.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

namespace {

// Truncated Taylor jet: c[k] = f^{(k)}(x) / k!.
struct Jet {
    std::array<double, 4> c{};
};

Jet variable(double x) { return Jet{{x, 1.0, 0.0, 0.0}}; }
Jet constant(double v) { return Jet{{v, 0.0, 0.0, 0.0}}; }

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i <= k; ++i) r.c[k] += a.c[i] * b.c[k - i];
    return r;
}

Jet operator*(double s, const Jet& a) {
    Jet r;
    for (int k = 0; k < 4; ++k) r.c[k] = s * a.c[k];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k < 4; ++k) {
        double v = a.c[k];
        for (int j = 1; j <= k; ++j) v -= b.c[j] * q.c[k - j];
        q.c[k] = v / b.c[0];
    }
    return q;
}

// f o g given f and its first three derivatives at g(x).
Jet compose(const Jet& g, double d0, double d1, double d2, double d3) {
    const double g1 = g.c[1], g2 = g.c[2], g3 = g.c[3];
    return Jet{{d0, d1 * g1, d1 * g2 + 0.5 * d2 * g1 * g1,
                d1 * g3 + d2 * g1 * g2 + d3 * g1 * g1 * g1 / 6.0}};
}

Jet jsqrt(const Jet& g) {
    const double x = g.c[0];
    const double r = std::sqrt(x);
    return compose(g, r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r));
}

Jet jtanh(const Jet& g) {
    const double t = std::tanh(g.c[0]);
    const double s = 1.0 - t * t;
    return compose(g, t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0));
}

// Polynomial in x^2: sum_j coeffs[j] x^{2j}.
Jet even_poly(const Jet& x, std::initializer_list<double> coeffs) {
    const Jet x2 = x * x;
    Jet r;
    Jet p = constant(1.0);
    for (double a : coeffs) {
        r = r + a * p;
        p = p * x2;
    }
    return r;
}

double derivative(const Jet& j, int order) {
    static constexpr double fact[4] = {1.0, 1.0, 2.0, 6.0};
    return j.c[order] * fact[order];
}

double whitham_positive(double x, double tau, int order) {
    const Jet xi = variable(x);
    Jet t;
    if (x < kSeriesThreshold)
        t = even_poly(xi, {1.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0});
    else
        t = jtanh(xi) / xi;
    const Jet w = xi * jsqrt(t * (constant(1.0) + tau * (xi * xi)));
    return derivative(w, order);
}

double ilw_positive(double x, double delta, int order) {
    const Jet xi = variable(x);
    Jet q;  // xi coth(delta xi)
    if (delta * x < kSeriesThreshold) {
        const Jet y = delta * xi;
        q = (1.0 / delta) * even_poly(y, {1.0, 1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0});
    } else {
        q = xi / jtanh(delta * xi);
    }
    return derivative(xi * q, order);
}

double smith_positive(double x, int order) {
    const Jet xi = variable(x);
    const Jet x2 = xi * xi;
    const Jet s = jsqrt(constant(1.0) + x2);
    return derivative((xi * x2) / (s + constant(1.0)), order);
}

double fkdv_eval(double xi, double a, int order) {
    const double ax = std::fabs(xi);
    const double sg = xi < 0 ? -1.0 : 1.0;
    if (xi == 0.0) {
        if (order <= 1) return 0.0;
        if (a < 1.0)
            throw DerivativeSingularity("fkdv derivative of order " + std::to_string(order) +
                                        " is unbounded at xi = 0 for alpha < 1");
        return 0.0;
    }
    switch (order) {
        case 0: return sg * std::pow(ax, a + 1.0);
        case 1: return (a + 1.0) * std::pow(ax, a);
        case 2: return sg * (a + 1.0) * a * std::pow(ax, a - 1.0);
        default: return (a + 1.0) * a * (a - 1.0) * std::pow(ax, a - 2.0);
    }
}

}  // namespace

std::string to_string(SymbolKind k) {
    switch (k) {
        case SymbolKind::fkdv: return "fkdv";
        case SymbolKind::whitham: return "whitham";
        case SymbolKind::ilw: return "ilw";
        case SymbolKind::smith: return "smith";
        case SymbolKind::custom: return "custom";
    }
    return "custom";
}

DispersiveSymbol::DispersiveSymbol(SymbolKind k, double alpha, double xi0, double param,
                                   Evaluator ev)
    : kind_(k), alpha_(alpha), xi0_(xi0), param_(param), custom_(std::move(ev)) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidParams("alpha must lie in (0, 1]");
    if (!(xi0 > 0.0)) throw InvalidParams("xi0 must be positive");
}

DispersiveSymbol DispersiveSymbol::fkdv(double alpha, double xi0) {
    return {SymbolKind::fkdv, alpha, xi0, 0.0, {}};
}

DispersiveSymbol DispersiveSymbol::whitham(double tau, double xi0) {
    if (!(tau > 0.0)) throw InvalidParams("whitham tau must be positive");
    return {SymbolKind::whitham, 0.5, xi0, tau, {}};
}

DispersiveSymbol DispersiveSymbol::ilw(double delta, double xi0) {
    if (!(delta > 0.0)) throw InvalidParams("ilw delta must be positive");
    return {SymbolKind::ilw, 1.0, xi0, delta, {}};
}

DispersiveSymbol DispersiveSymbol::smith(double xi0) {
    return {SymbolKind::smith, 1.0, xi0, 0.0, {}};
}

DispersiveSymbol DispersiveSymbol::custom(double alpha, double xi0, Evaluator ev) {
    if (!ev) throw InvalidParams("custom symbol needs an evaluator");
    return {SymbolKind::custom, alpha, xi0, 0.0, std::move(ev)};
}

std::string DispersiveSymbol::name() const {
    std::string n = to_string(kind_);
    if (kind_ == SymbolKind::fkdv) n += "(alpha=" + std::to_string(alpha_) + ")";
    if (kind_ == SymbolKind::whitham) n += "(tau=" + std::to_string(param_) + ")";
    if (kind_ == SymbolKind::ilw) n += "(delta=" + std::to_string(param_) + ")";
    return n;
}

double DispersiveSymbol::operator()(double xi, int order) const {
    if (order < 0 || order > 3) throw InvalidInput("derivative order must be in 0..3");
    if (kind_ == SymbolKind::fkdv) return fkdv_eval(xi, alpha_, order);
    if (kind_ == SymbolKind::custom) return custom_(xi, order);
    // Odd symbol: evaluate at |xi|, then d^k omega(-x) = (-1)^{k+1} d^k omega(x).
    const double x = std::fabs(xi);
    double v = 0.0;
    switch (kind_) {
        case SymbolKind::whitham: v = whitham_positive(x, param_, order); break;
        case SymbolKind::ilw: v = ilw_positive(x, param_, order); break;
        default: v = smith_positive(x, order); break;
    }
    const bool flip = xi < 0 && (order % 2 == 0);
    return flip ? -v : v;
}

double omega(const DispersiveSymbol& sym, double xi, int order) { return sym(xi, order); }

HypothesisReport check_hypothesis1(const DispersiveSymbol& sym, double xi_lo, double xi_hi,
                                   int n_samples) {
    if (xi_lo < sym.xi0()) throw InvalidRange("xi_lo is below xi0");
    if (!(xi_hi > xi_lo)) throw InvalidRange("xi_hi must exceed xi_lo");
    if (n_samples < 2) throw InvalidInput("need at least two samples");
    HypothesisReport rep;
    rep.xi_lo = xi_lo;
    rep.xi_hi = xi_hi;
    rep.n_samples = n_samples;
    const double a = sym.alpha();
    const double llo = std::log(xi_lo), lhi = std::log(xi_hi);
    bool all = true;
    for (int b = 0; b < 4; ++b) {
        HypothesisRow row;
        row.order = b;
        row.two_sided = !(b == 3 && a >= 1.0);
        row.inf_ratio = std::numeric_limits<double>::infinity();
        row.sup_ratio = 0.0;
        std::vector<double> lx, lr;
        for (int i = 0; i < n_samples; ++i) {
            const double t = llo + (lhi - llo) * double(i) / double(n_samples - 1);
            const double xi = std::exp(t);
            const double r = std::fabs(sym(xi, b)) / std::pow(xi, a + 1.0 - b);
            row.inf_ratio = std::min(row.inf_ratio, r);
            row.sup_ratio = std::max(row.sup_ratio, r);
            if (r > 0 && std::isfinite(r)) {
                lx.push_back(t);
                lr.push_back(std::log(r));
            }
        }
        row.trend_slope = lx.size() >= 2 ? fit_line(lx, lr).slope : 0.0;
        const bool finite = std::isfinite(row.sup_ratio);
        if (row.two_sided)
            row.pass = row.inf_ratio > 0 && finite && std::fabs(row.trend_slope) <= kTrendTolerance;
        else
            row.pass = finite && row.trend_slope <= kTrendTolerance;
        all = all && row.pass;
        rep.rows[b] = row;
    }
    rep.pass = all;
    return rep;
}

bool on_hyperplane(std::span<const double> freqs) noexcept {
    double mx = 0.0;
    for (double x : freqs) mx = std::max(mx, std::fabs(x));
    return std::fabs(exact_sum(freqs)) <= kHyperplaneTolerance * mx;
}

double resonance(const DispersiveSymbol& sym, std::span<const double> freqs) {
    if (freqs.size() != 3 && freqs.size() != 4)
        throw InvalidInput("resonance needs 3 or 4 frequencies");
    if (!on_hyperplane(freqs))
        throw NotOnHyperplane("frequencies do not sum to zero within tolerance");
    std::array<double, 4> w{};
    for (std::size_t i = 0; i < freqs.size(); ++i) w[i] = sym(freqs[i], 0);
    return exact_sum(std::span<const double>(w.data(), freqs.size()));
}

std::string to_string(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B1: return "B1";
        case Region::B2: return "B2";
        case Region::C1: return "C1";
        case Region::C2: return "C2";
        case Region::C3: return "C3";
        case Region::C4: return "C4";
        case Region::LOW: return "LOW";
        case Region::OTHER: return "OTHER";
    }
    return "OTHER";
}

Region region_from_string(const std::string& s) {
    for (Region r : {Region::A, Region::B1, Region::B2, Region::C1, Region::C2, Region::C3,
                     Region::C4, Region::LOW, Region::OTHER})
        if (to_string(r) == s) return r;
    throw InvalidInput("unknown region tag: " + s);
}

bool dyadic_sim(double a, double b, const DyadicRules& r) noexcept {
    if (a == 0.0 || b == 0.0) return a == b;
    const double q = a / b;
    return q >= 1.0 / r.sim_ratio && q <= r.sim_ratio;
}

bool dyadic_ll(double a, double b, const DyadicRules& r) noexcept {
    if (b == 0.0) return false;
    return a / b < 1.0 / r.sim_ratio;
}

namespace {

MagnitudeSet make_magnitudes(const std::array<double, 4>& n, const std::array<double, 3>& m,
                             double alpha) {
    MagnitudeSet s;
    s.N = n;
    s.M = m;
    std::array<double, 4> ns = n;
    std::sort(ns.begin(), ns.end());
    s.N_min = ns[0];
    s.N_thd = ns[1];
    s.N_sub = ns[2];
    s.N_max = ns[3];
    std::array<double, 3> ms = m;
    std::sort(ms.begin(), ms.end());
    s.M_min = ms[0];
    s.M_med = ms[1];
    s.M_max = ms[2];
    s.omega_comparator = s.M_min * s.M_med * std::pow(s.N_max, alpha - 1.0);
    return s;
}

}  // namespace

RegionLabel classify_region(const std::array<double, 4>& in, const DispersiveSymbol& sym,
                            const DyadicRules& rules) {
    RegionLabel lab;
    auto x = in;
    if (std::fabs(x[0]) > std::fabs(x[1])) std::swap(x[0], x[1]);
    if (std::fabs(x[2]) > std::fabs(x[3])) std::swap(x[2], x[3]);
    lab.xi = x;
    std::array<double, 4> nr{}, nd{};
    for (int i = 0; i < 4; ++i) {
        nr[i] = std::fabs(x[i]);
        nd[i] = dyadic(x[i]);
    }
    const std::array<double, 3> mr{std::fabs(x[1] + x[2]), std::fabs(x[0] + x[2]),
                                   std::fabs(x[0] + x[1])};
    const std::array<double, 3> md{dyadic(mr[0]), dyadic(mr[1]), dyadic(mr[2])};
    lab.raw = make_magnitudes(nr, mr, sym.alpha());
    lab.dyadic = make_magnitudes(nd, md, sym.alpha());

    const auto& d = lab.dyadic;
    const double N1 = nd[0], N2 = nd[1], N3 = nd[2], N4 = nd[3];
    auto sim = [&](double a, double b) { return dyadic_sim(a, b, rules); };
    auto ll = [&](double a, double b) { return dyadic_ll(a, b, rules); };
    auto lesssim = [&](double a, double b) { return !ll(b, a); };

    if (d.N_max < rules.high_factor * sym.xi0()) {
        lab.tag = Region::LOW;
    } else if (sim(d.N_min, d.N_max)) {
        lab.tag = Region::A;
    } else if (ll(d.N_min, d.N_thd) && sim(d.N_thd, d.N_max)) {
        if (N1 == d.N_min && N3 != d.N_min)
            lab.tag = Region::B1;
        else if (N3 == d.N_min && N1 != d.N_min)
            lab.tag = Region::B2;
        else
            lab.tag = Region::OTHER;
    } else if (ll(d.N_thd, d.N_max)) {
        if (sim(N1, N2) && ll(N4, N1))
            lab.tag = Region::C1;
        else if (sim(N3, N4) && ll(N2, N3) && lesssim(N1, N2))
            lab.tag = Region::C2;
        else if (sim(N2, N4) && ll(N3, N2) && ll(N1, N2) && ll(N1, N3))
            lab.tag = Region::C3;
        else if (sim(N2, N4) && ll(N1, N2) && lesssim(N3, N1))
            lab.tag = Region::C4;
        else
            lab.tag = Region::OTHER;
    } else {
        lab.tag = Region::OTHER;
    }
    return lab;
}

std::vector<std::array<int, 3>> torus_resonant_set(int kmax) {
    if (kmax < 1) throw InvalidInput("kmax must be positive");
    std::vector<std::array<int, 3>> out;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2)
            for (int k3 = -kmax; k3 <= kmax; ++k3) {
                const long long p = (long long)(k1 + k2) * (k1 + k3) * (k2 + k3);
                if (p == 0) out.push_back({k1, k2, k3});
            }
    return out;
}

}  // namespace nlb
