#include "nlb/energy_monitor.hpp"

#include <algorithm>
#include <cmath>

#include "nlb/errors.hpp"
#include "nlb/numeric.hpp"
#include "nlb/thresholds.hpp"

namespace nlb {

namespace {

constexpr std::size_t kRowChunk = 16;

struct ModeTable {
    std::vector<int> idx;         // indices with a nonzero first-slot coefficient
    std::vector<double> nu, om, absk;
};

// Sum over k1 + k2 + k3 = 0 of num(i1, i2, i3) / Omega_3 * a(k1) a(k2) b(k3).
template <class Num>
double triple_sum(const SpectralField& a, const SpectralField& b, const DispersiveSymbol& sym,
                  Num num, double* imag_rel) {
    const auto& g = a.grid();
    if (!(g == b.grid())) throw InvalidInput("fields live on different grids");
    if (g.K() > kMaxEnergyK) throw InvalidParams("K above the energy evaluation cap");
    const int K = g.K();
    std::vector<double> om(static_cast<std::size_t>(K)), absk(static_cast<std::size_t>(K));
    std::vector<int> rows;
    for (int i = 0; i < K; ++i) {
        const double k = g.wavenumber(i);
        om[std::size_t(i)] = sym(k);
        absk[std::size_t(i)] = std::fabs(k);
        if (a[i] != cplx(0.0)) rows.push_back(i);
    }
    const double alpha = sym.alpha();
    const std::size_t nchunks = (rows.size() + kRowChunk - 1) / kRowChunk;
    std::vector<CompensatedComplexSum> part(nchunks);
    std::vector<CompensatedSum> mag(nchunks);
    parallel_chunks(rows.size(), kRowChunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        CompensatedComplexSum acc;
        CompensatedSum m;
        for (std::size_t r = lo; r < hi; ++r) {
            const int i1 = rows[r];
            const int k1 = g.mode(i1);
            for (int i2 : rows) {
                const int k3 = -(k1 + g.mode(i2));
                if (k3 < -K / 2 || k3 >= K / 2) continue;
                const int i3 = k3 >= 0 ? k3 : k3 + K;
                const cplx c3 = b[i3];
                if (c3 == cplx(0.0)) continue;
                const double n = num(i1, i2, i3);
                if (n == 0.0) continue;
                const std::size_t u1 = std::size_t(i1), u2 = std::size_t(i2), u3 = std::size_t(i3);
                CompensatedSum d;
                d.add(om[u1]);
                d.add(om[u2]);
                d.add(om[u3]);
                const double den = d.value();
                const double nmin = std::min({absk[u1], absk[u2], absk[u3]});
                const double nmax = std::max({absk[u1], absk[u2], absk[u3]});
                if (!(std::fabs(den) >= kResonantThreshold * nmin * std::pow(nmax, alpha)) ||
                    den == 0.0)
                    throw ResonantDivision("Omega_3 vanishes on a mode triple with nonzero numerator");
                const cplx t = (n / den) * a[i1] * a[i2] * c3;
                acc.add(t);
                m.add(std::abs(t));
            }
        }
        part[c] = acc;
        mag[c] = m;
    });
    CompensatedComplexSum tot;
    CompensatedSum totm;
    for (std::size_t c = 0; c < nchunks; ++c) {
        tot.add(part[c]);
        totm.add(mag[c]);
    }
    const cplx v = tot.value();
    const double L2 = g.L() * g.L();
    if (imag_rel) *imag_rel = totm.value() > 0 ? std::fabs(v.imag()) / totm.value() : 0.0;
    return v.real() / L2;
}

}  // namespace

double cubic_form(const SpectralField& u, const DispersiveSymbol& sym, double s, double N0,
                  double* imag_rel) {
    const auto& g = u.grid();
    std::vector<double> nu(std::size_t(g.K()));
    for (int i = 0; i < g.K(); ++i) nu[std::size_t(i)] = nu_s(g.wavenumber(i), s, N0);
    return triple_sum(
        u, u, sym,
        [&](int i1, int i2, int i3) {
            CompensatedSum n;
            n.add(nu[std::size_t(i1)]);
            n.add(nu[std::size_t(i2)]);
            n.add(nu[std::size_t(i3)]);
            return n.value();
        },
        imag_rel);
}

double cubic_form_tilde(const SpectralField& w, const SpectralField& z,
                        const DispersiveSymbol& sym, double sigma, double N0, double* imag_rel) {
    const auto& g = w.grid();
    std::vector<double> nt(std::size_t(g.K())), ak(std::size_t(g.K()));
    for (int i = 0; i < g.K(); ++i) {
        nt[std::size_t(i)] = nu_tilde_sigma(g.wavenumber(i), sigma);
        ak[std::size_t(i)] = std::fabs(g.wavenumber(i));
    }
    return triple_sum(
        w, z, sym,
        [&](int i1, int i2, int i3) {
            // |k1 + k2| = |k3|
            if (!(ak[std::size_t(i3)] > N0)) return 0.0;
            return nt[std::size_t(i1)] + nt[std::size_t(i2)];
        },
        imag_rel);
}

EnergyBreakdown modified_energy(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                double N0) {
    EnergyBreakdown e;
    e.s_or_sigma = s;
    e.N0 = N0;
    e.coefficient = 1.0 / 3.0;
    e.quadratic = 0.5 * (norm_sq(u, {0.0}) + homogeneous_norm_sq(u, s));
    e.cubic = cubic_form(u, sym, s, N0, &e.cubic_imag_rel);
    e.total = e.quadratic + e.coefficient * e.cubic;
    return e;
}

EnergyBreakdown high_freq_energy(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                 double N0) {
    EnergyBreakdown e;
    e.s_or_sigma = s;
    e.N0 = N0;
    e.coefficient = 1.0 / 3.0;
    e.quadratic = 0.5 * homogeneous_norm_sq(project(u, Projection::gt(N0)), s);
    e.cubic = cubic_form(u, sym, s, N0, &e.cubic_imag_rel);
    e.total = e.quadratic + e.coefficient * e.cubic;
    return e;
}

EnergyBreakdown difference_energy(const SpectralField& w, const SpectralField& z,
                                  const DispersiveSymbol& sym, double sigma, double N0) {
    EnergyBreakdown e;
    e.s_or_sigma = sigma;
    e.N0 = N0;
    e.coefficient = 0.5;
    const auto sn = split_norm_sq(w, sigma);
    e.quadratic_low = 0.5 * sn.low;
    e.quadratic_high = 0.5 * sn.high;
    e.quadratic = e.quadratic_low + e.quadratic_high;
    e.cubic = cubic_form_tilde(w, z, sym, sigma, N0, &e.cubic_imag_rel);
    e.total = e.quadratic + e.coefficient * e.cubic;
    return e;
}

namespace {

double next_dyadic_at_least(double x) { return std::exp2(std::ceil(std::log2(std::max(x, 1.0)))); }

}  // namespace

CoercivityResult coercivity_check(const SpectralField& u, const DispersiveSymbol& sym, double s,
                                  double N0, double C1) {
    const double a = sym.alpha();
    const double st = s_tilde_alpha(a);
    CoercivityResult r;
    const double nrm = norm_sq(u, {s});
    const auto e = modified_energy(u, sym, s, N0);
    r.lhs = std::fabs(e.total - 0.5 * nrm);
    r.rhs = 0.25 * nrm;
    r.gap_ratio = nrm > 0 ? r.lhs / nrm : 0.0;
    r.pass = r.lhs <= r.rhs;
    r.N0_required = next_dyadic_at_least(C1 * std::pow(1.0 + norm(u, {st}), 2.0 / a));
    r.in_hypothesis = N0 >= r.N0_required && s > st && s <= 3.0;
    return r;
}

CoercivityResult difference_coercivity_check(const SpectralField& w, const SpectralField& z,
                                             const DispersiveSymbol& sym, double sigma,
                                             double s, double N0, double C1) {
    CoercivityResult r;
    const auto e = difference_energy(w, z, sym, sigma, N0);
    const double nrm = 2.0 * e.quadratic;
    r.lhs = std::fabs(e.total - 0.5 * nrm);
    r.rhs = 0.25 * nrm;
    r.gap_ratio = nrm > 0 ? r.lhs / nrm : 0.0;
    r.pass = r.lhs <= r.rhs;
    r.N0_required = next_dyadic_at_least(C1 * std::pow(1.0 + norm(z, {s}), 2.0));
    r.in_hypothesis = N0 >= r.N0_required && s > s_alpha(sym.alpha()) &&
                      in_difference_window(sym.alpha(), s, sigma);
    return r;
}

double strichartz_norm(const Trajectory& tr, double s, double alpha, double eps) {
    if (tr.fields.empty()) return 0.0;
    if (tr.fields.size() != tr.times.size()) throw InvalidInput("trajectory times and fields differ");
    const double r = s - (0.5 - 0.25 * alpha) - eps;
    std::vector<double> sup(tr.fields.size());
    for (std::size_t n = 0; n < tr.fields.size(); ++n) {
        SpectralField f = tr.fields[n];
        const auto& g = f.grid();
        for (int i = 0; i < g.K(); ++i) {
            const double k = g.wavenumber(i);
            f[i] *= std::pow(1.0 + k * k, 0.5 * r);
        }
        double m = 0.0;
        for (double v : to_physical(f)) m = std::max(m, std::fabs(v));
        sup[n] = m * m;
    }
    CompensatedSum acc;
    for (std::size_t n = 1; n < sup.size(); ++n)
        acc.add(0.5 * (tr.times[n] - tr.times[n - 1]) * (sup[n] + sup[n - 1]));
    return std::sqrt(acc.value());
}

}  // namespace nlb
