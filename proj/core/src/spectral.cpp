#include "nlb/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "nlb/errors.hpp"
#include "nlb/fft.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

TorusGrid::TorusGrid(int K, double L) : K_(K), L_(L), dk_(2.0 * std::numbers::pi / L) {
    if (K < 8 || (K & (K - 1)) != 0) throw InvalidParams("K must be a power of two >= 8");
    if (!(L > 0) || !std::isfinite(L)) throw InvalidParams("L must be positive");
}

int TorusGrid::index(int m) const {
    if (m < -K_ / 2 || m >= K_ / 2) throw InvalidInput("mode outside the grid");
    return m >= 0 ? m : m + K_;
}

SpectralField::SpectralField(const TorusGrid& g) : grid_(g), c_(std::size_t(g.K())) {}

SpectralField::SpectralField(const TorusGrid& g, std::vector<cplx> coeffs)
    : grid_(g), c_(std::move(coeffs)) {
    if (int(c_.size()) != g.K()) throw InvalidInput("coefficient count does not match K");
}

cplx SpectralField::at_mode(int k) const {
    const int K = grid_.K();
    if (k < -K / 2 || k >= K / 2) return {0.0, 0.0};
    return c_[std::size_t(grid_.index(k))];
}

void SpectralField::set_mode(int k, cplx v) {
    c_[std::size_t(grid_.index(k))] = v;
    if (k != 0 && -k < grid_.K() / 2) c_[std::size_t(grid_.index(-k))] = std::conj(v);
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
}

double SpectralField::hermitian_defect() const {
    const int K = grid_.K();
    double d = std::fabs(c_[0].imag());
    d = std::max(d, std::fabs(c_[std::size_t(K / 2)].imag()));
    for (int k = 1; k < K / 2; ++k)
        d = std::max(d, std::abs(c_[std::size_t(K - k)] - std::conj(c_[std::size_t(k)])));
    const double m = max_abs();
    return m > 0 ? d / m : 0.0;
}

void SpectralField::symmetrize() {
    const int K = grid_.K();
    c_[0] = {c_[0].real(), 0.0};
    c_[std::size_t(K / 2)] = {c_[std::size_t(K / 2)].real(), 0.0};
    for (int k = 1; k < K / 2; ++k) {
        const cplx a = 0.5 * (c_[std::size_t(k)] + std::conj(c_[std::size_t(K - k)]));
        c_[std::size_t(k)] = a;
        c_[std::size_t(K - k)] = std::conj(a);
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!(grid_ == o.grid_)) throw InvalidInput("fields live on different grids");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!(grid_ == o.grid_)) throw InvalidInput("fields live on different grids");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& z : c_) z *= a;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField to_spectral(const TorusGrid& g, const std::vector<double>& samples) {
    if (int(samples.size()) != g.K()) throw InvalidInput("sample count does not match K");
    std::vector<cplx> d(samples.begin(), samples.end());
    dft(d, -1);
    const double s = g.L() / double(g.K());
    for (auto& z : d) z *= s;
    return SpectralField(g, std::move(d));
}

std::vector<cplx> to_physical_complex(const SpectralField& f) {
    std::vector<cplx> d = f.coeffs();
    dft(d, +1);
    const double s = 1.0 / f.grid().L();
    for (auto& z : d) z *= s;
    return d;
}

std::vector<double> to_physical(const SpectralField& f) {
    const auto d = to_physical_complex(f);
    std::vector<double> u(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) u[i] = d[i].real();
    return u;
}

namespace {

template <class W>
double weighted_sum(const SpectralField& f, W w) {
    CompensatedSum acc;
    const auto& g = f.grid();
    for (int i = 0; i < g.K(); ++i) {
        const double a = std::norm(f[i]);
        if (a != 0.0) acc.add(w(g.wavenumber(i)) * a);
    }
    return acc.value() / g.L();
}

void require_mean_zero(const SpectralField& f) {
    if (std::abs(f[0]) > 1e-12 * std::max(1.0, f.max_abs()))
        throw MeanNotZero("field has a nonzero mean mode");
}

}  // namespace

double norm_sq(const SpectralField& f, const NormSpec& spec) {
    if (spec.weighted || spec.requires_mean_zero) require_mean_zero(f);
    return weighted_sum(f, [&](double k) {
        double w = std::pow(1.0 + k * k, spec.s);
        if (spec.weighted && k != 0.0) w *= 1.0 + 1.0 / (k * k);
        return w;
    });
}

double norm(const SpectralField& f, const NormSpec& spec) { return std::sqrt(norm_sq(f, spec)); }

double homogeneous_norm_sq(const SpectralField& f, double s) {
    return weighted_sum(f, [&](double k) { return k == 0.0 ? 0.0 : std::pow(std::fabs(k), 2 * s); });
}

SplitNorm split_norm_sq(const SpectralField& f, double sigma) {
    require_mean_zero(f);
    SplitNorm n;
    n.low = weighted_sum(f, [](double k) {
        const double a = std::fabs(k);
        return (a > 0 && a < 1) ? 1.0 / (a * a) : 0.0;
    });
    n.high = weighted_sum(f, [&](double k) {
        const double a = std::fabs(k);
        return a >= 1 ? std::pow(a, 2 * sigma) : 0.0;
    });
    return n;
}

double eta(double r) noexcept {
    r = std::fabs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double t = 2.0 - r;  // 1 at r = 1, 0 at r = 2
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double phi(double xi, double N) noexcept {
    const double a = std::fabs(xi) / N;
    return eta(a) - eta(2.0 * a);
}

double multiplier(const Projection& p, double xi) noexcept {
    const double a = std::fabs(xi);
    switch (p.kind) {
        case ProjectionKind::smooth: return phi(xi, p.N);
        case ProjectionKind::smooth_wide:
            return phi(xi, 0.5 * p.N) + phi(xi, p.N) + phi(xi, 2.0 * p.N);
        case ProjectionKind::sharp_le: return a <= p.N ? 1.0 : 0.0;
        case ProjectionKind::sharp_gt: return a > p.N ? 1.0 : 0.0;
        case ProjectionKind::band: return (a >= p.lo && a <= p.hi) ? 1.0 : 0.0;
    }
    return 0.0;
}

SpectralField project(const SpectralField& f, const Projection& p) {
    if ((p.kind == ProjectionKind::smooth || p.kind == ProjectionKind::smooth_wide) && !(p.N > 0))
        throw InvalidParams("projection scale must be positive");
    SpectralField r = f;
    const auto& g = f.grid();
    for (int i = 0; i < g.K(); ++i) {
        const double m = multiplier(p, g.wavenumber(i));
        if (m != 1.0) r[i] *= m;
    }
    return r;
}

int dealias_cutoff(const TorusGrid& g, double fraction) {
    if (!(fraction > 0 && fraction <= 1)) throw InvalidParams("dealias fraction must be in (0, 1]");
    return int(std::floor(fraction * 0.5 * double(g.K()) + 1e-9));
}

SpectralField dealias(const SpectralField& f, double fraction) {
    const auto& g = f.grid();
    const int kc = dealias_cutoff(g, fraction);
    SpectralField r = f;
    for (int i = 0; i < g.K(); ++i)
        if (std::abs(g.mode(i)) > kc) r[i] = 0.0;
    return r;
}

SpectralField linear_propagator(const DispersiveSymbol& sym, const SpectralField& f, double t) {
    SpectralField r = f;
    const auto& g = f.grid();
    for (int i = 0; i < g.K(); ++i) {
        if (r[i] == cplx(0.0)) continue;
        r[i] *= std::polar(1.0, t * sym(g.wavenumber(i)));
    }
    return r;
}

}  // namespace nlb
