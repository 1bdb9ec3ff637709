#include "nlb/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "nlb/errors.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

std::string to_string(Scheme s) { return s == Scheme::etdrk4 ? "etdrk4" : "lawson_rk4"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "etdrk4") return Scheme::etdrk4;
    if (s == "lawson_rk4") return Scheme::lawson_rk4;
    throw InvalidParams("unknown scheme: " + s);
}

void validate(const SolverConfig& cfg, const DispersiveSymbol& sym, const TorusGrid& g) {
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw InvalidParams("dt must be positive");
    if (!(cfg.T > 0) || cfg.dt > cfg.T * (1 + 1e-12)) throw InvalidParams("need 0 < dt <= T");
    if (cfg.snapshot_stride < 1) throw InvalidParams("snapshot_stride must be >= 1");
    if (cfg.cubic_sign != 1 && cfg.cubic_sign != -1) throw InvalidParams("cubic_sign must be +-1");
    const int kc = dealias_cutoff(g, cfg.dealias_fraction);
    if (cfg.scheme == Scheme::lawson_rk4) {
        double wmax = 0.0;
        for (int k = 1; k <= kc; ++k) wmax = std::max(wmax, std::fabs(sym(g.dk() * k)));
        if (cfg.dt * wmax > kLawsonGuard)
            throw InvalidParams("lawson_rk4 stability guard: dt max|omega| = " +
                                std::to_string(cfg.dt * wmax) + " > 50");
    }
}

SpectralField nonlinearity(const SpectralField& f, double frac) {
    const auto& g = f.grid();
    auto u = to_physical(f);
    for (double& v : u) v *= v;
    SpectralField r = to_spectral(g, u);
    const int kc = dealias_cutoff(g, frac);
    for (int i = 0; i < g.K(); ++i) {
        if (std::abs(g.mode(i)) > kc || g.mode(i) == 0)
            r[i] = 0.0;
        else
            r[i] *= cplx(0.0, g.wavenumber(i));
    }
    return r;
}

double cubic_integral(const SpectralField& f) {
    const auto& g = f.grid();
    const int K = g.K();
    TorusGrid g2(2 * K, g.L());
    SpectralField p(g2);
    for (int i = 0; i < K; ++i) {
        const int m = g.mode(i);
        if (m == -K / 2) continue;  // unpaired Nyquist mode carries no real content
        p[g2.index(m)] = f[i];
    }
    const auto u = to_physical(p);
    CompensatedSum acc;
    for (double v : u) acc.add(v * v * v);
    return acc.value() * g.L() / double(2 * K);
}

Invariants invariants(const SpectralField& f, const DispersiveSymbol& sym, int cubic_sign) {
    const auto& g = f.grid();
    Invariants inv;
    CompensatedSum m, q;
    for (int i = 0; i < g.K(); ++i) {
        const double a = std::norm(f[i]);
        if (a == 0.0) continue;
        m.add(a);
        const double k = g.wavenumber(i);
        const double w = k == 0.0 ? sym(0.0, 1) : sym(k) / k;
        q.add(w * a);
    }
    inv.mass = m.value() / g.L();
    inv.quadratic = 0.5 * q.value() / g.L();
    inv.cubic = cubic_integral(f);
    inv.hamiltonian = inv.quadratic + double(cubic_sign) * inv.cubic / 3.0;
    return inv;
}

namespace {

cplx phi_series(cplx z, int n) {
    // sum_{m>=0} z^m / (m+n)!
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    cplx term = 1.0 / fact, sum = term;
    for (int m = 1; m < 30; ++m) {
        term *= z / double(m + n);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

cplx phi1(cplx z) { return std::abs(z) < 0.5 ? phi_series(z, 1) : (std::exp(z) - 1.0) / z; }
cplx phi2(cplx z) {
    return std::abs(z) < 0.5 ? phi_series(z, 2) : (std::exp(z) - 1.0 - z) / (z * z);
}
cplx phi3(cplx z) {
    return std::abs(z) < 0.5 ? phi_series(z, 3)
                             : (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

Stepper::Stepper(const DispersiveSymbol& sym, const TorusGrid& g, double dt, Scheme scheme,
                 double frac, bool linear_only)
    : grid_(g), dt_(dt), scheme_(scheme), frac_(frac), linear_only_(linear_only) {
    const std::size_t K = std::size_t(g.K());
    E_.resize(K);
    E2_.resize(K);
    Q_.resize(K);
    f1_.resize(K);
    f2_.resize(K);
    f3_.resize(K);
    for (int i = 0; i < g.K(); ++i) {
        const double w = sym(g.wavenumber(i));
        const cplx z(0.0, dt * w);
        const auto u = std::size_t(i);
        E_[u] = std::exp(z);
        E2_[u] = std::exp(0.5 * z);
        if (scheme == Scheme::etdrk4) {
            const cplx p1 = phi1(z), p2 = phi2(z), p3 = phi3(z);
            Q_[u] = 0.5 * dt * phi1(0.5 * z);
            f1_[u] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
            f2_[u] = dt * (p2 - 2.0 * p3);
            f3_[u] = dt * (-p2 + 4.0 * p3);
        }
    }
}

SpectralField Stepper::N(const SpectralField& u) const {
    if (linear_only_) return SpectralField(grid_);
    return nonlinearity(u, frac_);
}

SpectralField Stepper::step(const SpectralField& u) const {
    const std::size_t K = std::size_t(grid_.K());
    if (linear_only_) {
        SpectralField r = u;
        for (std::size_t i = 0; i < K; ++i) r.coeffs()[i] *= E_[i];
        return r;
    }
    const auto& uc = u.coeffs();
    if (scheme_ == Scheme::etdrk4) {
        const SpectralField Nu = N(u);
        SpectralField a(grid_), b(grid_), c(grid_);
        for (std::size_t i = 0; i < K; ++i) a.coeffs()[i] = E2_[i] * uc[i] + Q_[i] * Nu.coeffs()[i];
        const SpectralField Na = N(a);
        for (std::size_t i = 0; i < K; ++i) b.coeffs()[i] = E2_[i] * uc[i] + Q_[i] * Na.coeffs()[i];
        const SpectralField Nb = N(b);
        for (std::size_t i = 0; i < K; ++i)
            c.coeffs()[i] = E2_[i] * a.coeffs()[i] + Q_[i] * (2.0 * Nb.coeffs()[i] - Nu.coeffs()[i]);
        const SpectralField Nc = N(c);
        SpectralField r(grid_);
        for (std::size_t i = 0; i < K; ++i)
            r.coeffs()[i] = E_[i] * uc[i] + f1_[i] * Nu.coeffs()[i] +
                            2.0 * f2_[i] * (Na.coeffs()[i] + Nb.coeffs()[i]) + f3_[i] * Nc.coeffs()[i];
        return r;
    }
    // Lawson: classical RK4 on v = e^{-tL} u
    const double h = dt_;
    const SpectralField k1 = N(u);
    SpectralField t(grid_);
    for (std::size_t i = 0; i < K; ++i) t.coeffs()[i] = E2_[i] * (uc[i] + 0.5 * h * k1.coeffs()[i]);
    const SpectralField k2 = N(t);
    for (std::size_t i = 0; i < K; ++i) t.coeffs()[i] = E2_[i] * uc[i] + 0.5 * h * k2.coeffs()[i];
    const SpectralField k3 = N(t);
    for (std::size_t i = 0; i < K; ++i) t.coeffs()[i] = E_[i] * uc[i] + h * E2_[i] * k3.coeffs()[i];
    const SpectralField k4 = N(t);
    SpectralField r(grid_);
    for (std::size_t i = 0; i < K; ++i)
        r.coeffs()[i] = E_[i] * uc[i] + h / 6.0 *
                                            (E_[i] * k1.coeffs()[i] +
                                             2.0 * E2_[i] * (k2.coeffs()[i] + k3.coeffs()[i]) +
                                             k4.coeffs()[i]);
    return r;
}

namespace {

bool all_finite(const SpectralField& f) {
    for (const auto& z : f.coeffs())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

SpectralField step(const SpectralField& u, const DispersiveSymbol& sym, double dt, Scheme scheme,
                   double frac) {
    Stepper st(sym, u.grid(), dt, scheme, frac);
    auto r = st.step(u);
    if (!all_finite(r)) throw NonFiniteState("state became non-finite", dt);
    return r;
}

Trajectory simulate(const SpectralField& u0, const DispersiveSymbol& sym, const SolverConfig& cfg) {
    const auto& g = u0.grid();
    validate(cfg, sym, g);
    const long n = std::max(1L, long(std::ceil(cfg.T / cfg.dt - 1e-9)));
    const double h = cfg.T / double(n);
    Stepper st(sym, g, h, cfg.scheme, cfg.dealias_fraction, cfg.linear_only);
    Trajectory tr;
    tr.norms.resize(cfg.norm_s.size());
    auto record = [&](double t, const SpectralField& u) {
        tr.monitor_times.push_back(t);
        const auto inv = invariants(u, sym, cfg.cubic_sign);
        tr.mass.push_back(inv.mass);
        tr.hamiltonian.push_back(inv.hamiltonian);
        tr.mean_re.push_back(u[0].real());
        for (std::size_t i = 0; i < cfg.norm_s.size(); ++i)
            tr.norms[i].push_back(norm(u, {cfg.norm_s[i], false, false}));
    };
    SpectralField u = cfg.linear_only ? u0 : dealias(u0, cfg.dealias_fraction);
    record(0.0, u);
    tr.times.push_back(0.0);
    tr.fields.push_back(u);
    for (long s = 1; s <= n; ++s) {
        u = st.step(u);
        const double t = s == n ? cfg.T : h * double(s);
        if (!all_finite(u)) throw NonFiniteState("state became non-finite", t);
        record(t, u);
        if (s % cfg.snapshot_stride == 0 || s == n) {
            tr.times.push_back(t);
            tr.fields.push_back(u);
        }
    }
    return tr;
}

}  // namespace nlb
