#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "nlb/dispersion.hpp"

namespace nlb {

using cplx = std::complex<double>;

// Uniform grid on [0, L) with K nodes; modes k = -K/2 .. K/2-1 scaled by 2 pi / L.
// Coefficients are stored in FFT order: index j holds integer mode j for
// j < K/2 and j - K otherwise.
class TorusGrid {
public:
    explicit TorusGrid(int K, double L = 2.0 * std::numbers::pi);

    int K() const noexcept { return K_; }
    double L() const noexcept { return L_; }
    double x(int j) const noexcept { return L_ * double(j) / double(K_); }
    int mode(int idx) const noexcept { return idx < K_ / 2 ? idx : idx - K_; }
    int index(int mode) const;  // throws InvalidInput if out of range
    double wavenumber(int idx) const noexcept { return dk_ * double(mode(idx)); }
    double dk() const noexcept { return dk_; }
    bool operator==(const TorusGrid& o) const noexcept { return K_ == o.K_ && L_ == o.L_; }

private:
    int K_;
    double L_;
    double dk_;
};

// Real periodic function as Fourier coefficients u^(k) = int_0^L u e^{-ikx} dx.
class SpectralField {
public:
    explicit SpectralField(const TorusGrid& g);
    SpectralField(const TorusGrid& g, std::vector<cplx> coeffs);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::vector<cplx>& coeffs() noexcept { return c_; }
    const std::vector<cplx>& coeffs() const noexcept { return c_; }
    cplx& operator[](int idx) { return c_[std::size_t(idx)]; }
    const cplx& operator[](int idx) const { return c_[std::size_t(idx)]; }
    // coefficient of integer mode k (zero when k is outside the grid)
    cplx at_mode(int k) const;
    void set_mode(int k, cplx v);  // sets k and, for k != 0, the conjugate at -k

    // max over paired modes of |u(-k) - conj u(k)|, relative to max |u|
    double hermitian_defect() const;
    // enforce the symmetry: average paired modes, zero imaginary parts of
    // k = 0 and the unpaired Nyquist mode
    void symmetrize();
    double max_abs() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);

private:
    TorusGrid grid_;
    std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Forward: u^ = (L/K) DFT(u).  Inverse: u(x_j) = (1/L) sum_k u^(k) e^{ikx_j}.
SpectralField to_spectral(const TorusGrid& g, const std::vector<double>& samples);
std::vector<double> to_physical(const SpectralField& f);
std::vector<cplx> to_physical_complex(const SpectralField& f);

struct NormSpec {
    double s = 0.0;
    bool weighted = false;           // extra factor <|k|^{-1}>^2 = 1 + |k|^{-2} for k != 0
    bool requires_mean_zero = false;
};

// ||u||_{H^s}^2 = (1/L) sum <k>^{2s} |u^(k)|^2, <k> = (1 + k^2)^{1/2}
double norm_sq(const SpectralField& f, const NormSpec& spec);
double norm(const SpectralField& f, const NormSpec& spec);
// (1/L) sum_{k != 0} |k|^{2s} |u^(k)|^2
double homogeneous_norm_sq(const SpectralField& f, double s);
// (1/L) [sum_{0<|k|<1} |k|^{-2} |u^|^2 + sum_{|k|>=1} |k|^{2 sigma} |u^|^2]; requires mean zero
struct SplitNorm {
    double low = 0.0, high = 0.0;
    double total() const noexcept { return low + high; }
};
SplitNorm split_norm_sq(const SpectralField& f, double sigma);

// eta: 1 on [0,1], quintic smoothstep down to 0 on [1,2], 0 beyond (C^2)
double eta(double r) noexcept;
// phi_N(xi) = eta(|xi|/N) - eta(2|xi|/N), supported in N/2 <= |xi| <= 2N
double phi(double xi, double N) noexcept;

enum class ProjectionKind { smooth, smooth_wide, sharp_le, sharp_gt, band };

struct Projection {
    ProjectionKind kind = ProjectionKind::sharp_le;
    double N = 1.0;
    double lo = 0.0, hi = 0.0;  // band: lo <= |k| <= hi
    static Projection P(double N) { return {ProjectionKind::smooth, N}; }
    static Projection P_wide(double N) { return {ProjectionKind::smooth_wide, N}; }
    static Projection le(double N) { return {ProjectionKind::sharp_le, N}; }
    static Projection gt(double N) { return {ProjectionKind::sharp_gt, N}; }
    static Projection band(double lo, double hi) { return {ProjectionKind::band, 0.0, lo, hi}; }
};

double multiplier(const Projection& p, double xi) noexcept;
SpectralField project(const SpectralField& f, const Projection& p);

inline constexpr double kDefaultDealias = 2.0 / 3.0;
// Largest retained |k| (as integer mode) for a given rule.
int dealias_cutoff(const TorusGrid& g, double fraction);
SpectralField dealias(const SpectralField& f, double fraction = kDefaultDealias);

// Multiplies u^(k) by e^{i t omega(k)}.
SpectralField linear_propagator(const DispersiveSymbol& sym, const SpectralField& f, double t);

}  // namespace nlb
