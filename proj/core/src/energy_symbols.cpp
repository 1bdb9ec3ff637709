#include "nlb/energy_symbols.hpp"

#include <algorithm>
#include <cmath>

#include "nlb/errors.hpp"
#include "nlb/numeric.hpp"

namespace nlb {

bool is_power_of_two(double x) noexcept {
    if (!(x > 0) || !std::isfinite(x)) return false;
    int e = 0;
    return std::frexp(x, &e) == 0.5;
}

void validate(const EnergySymbolParams& p) {
    if (!is_power_of_two(p.N0)) throw InvalidParams("N0 must be a power of two");
    if (p.N0 < std::max(1.0, p.sym.xi0())) throw InvalidParams("N0 must be >= max(1, xi0)");
    if (!std::isfinite(p.s) || !std::isfinite(p.sigma)) throw InvalidParams("s, sigma must be finite");
}

bool in_a4tilde_window(double alpha, double sigma) noexcept {
    return sigma > -0.5 && sigma < std::min(0.0, -0.5 + 0.5 * alpha);
}

bool in_difference_window(double alpha, double s, double sigma) noexcept {
    return sigma > -0.5 + 0.25 * alpha && sigma < std::min(0.5 * (alpha - 1.0), s - 1.5 + alpha);
}

double nu_s(double xi, double s, double N0) noexcept {
    const double a = std::fabs(xi);
    if (a < N0) return 0.0;
    return xi * std::pow(a, 2.0 * s);
}

double nu_tilde_sigma(double xi, double sigma) noexcept {
    const double a = std::fabs(xi);
    if (a < 1.0) return 0.0;
    return xi * std::pow(a, 2.0 * sigma);
}

namespace {

double omega3(const DispersiveSymbol& sym, double x1, double x2, double x3) {
    const std::array<double, 3> w{sym(x1), sym(x2), sym(x3)};
    return exact_sum(w);
}

double divide(const DispersiveSymbol& sym, double num, double x1, double x2, double x3) {
    const double om = omega3(sym, x1, x2, x3);
    const double n1 = std::fabs(x1), n2 = std::fabs(x2), n3 = std::fabs(x3);
    const double nmin = std::min({n1, n2, n3});
    const double nmax = std::max({n1, n2, n3});
    const double scale = nmin * std::pow(nmax, sym.alpha());
    if (!(std::fabs(om) >= kResonantThreshold * scale) || om == 0.0)
        throw ResonantDivision("Omega_3 vanishes at (" + std::to_string(x1) + ", " +
                               std::to_string(x2) + ", " + std::to_string(x3) + ")");
    return num / om;
}

}  // namespace

double a3(const EnergySymbolParams& p, double xi1, double xi2) {
    const double xi3 = -(xi1 + xi2);
    const std::array<double, 3> v{nu_s(xi1, p.s, p.N0), nu_s(xi2, p.s, p.N0),
                                  nu_s(xi3, p.s, p.N0)};
    return exact_sum(v);
}

double b3(const EnergySymbolParams& p, double xi1, double xi2) {
    const double num = a3(p, xi1, xi2);
    if (num == 0.0) return 0.0;
    return divide(p.sym, num, xi1, xi2, -(xi1 + xi2));
}

double a4(const EnergySymbolParams& p, double xi1, double xi2, double xi3) {
    return a4(p, {xi1, xi2, xi3, -(xi1 + xi2 + xi3)});
}

double a4(const EnergySymbolParams& p, const std::array<double, 4>& x) {
    if (!on_hyperplane(x)) throw NotOnHyperplane("a4 needs a zero-sum quadruple");
    std::array<double, 6> t{};
    int n = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double m = x[i] + x[j];
            t[n++] = m == 0.0 ? 0.0 : m * b3(p, x[i], x[j]);
        }
    return exact_sum(t);
}

double a4_grouped(const EnergySymbolParams& p, const std::array<double, 4>& x) {
    if (!on_hyperplane(x)) throw NotOnHyperplane("a4 needs a zero-sum quadruple");
    auto pair = [&](int i, int j, int k, int l) {
        const double m = x[i] + x[j];
        if (m == 0.0) return 0.0;
        return m * (b3(p, x[i], x[j]) - b3(p, x[k], x[l]));
    };
    const std::array<double, 3> t{pair(0, 1, 2, 3), pair(1, 2, 0, 3), pair(0, 2, 1, 3)};
    return exact_sum(t);
}

double a3_tilde(const EnergySymbolParams& p, double xi1, double xi2) {
    if (!(std::fabs(xi1 + xi2) > p.N0)) return 0.0;
    const std::array<double, 2> v{nu_tilde_sigma(xi1, p.sigma), nu_tilde_sigma(xi2, p.sigma)};
    return exact_sum(v);
}

double b3_tilde(const EnergySymbolParams& p, double xi1, double xi2) {
    const double num = a3_tilde(p, xi1, xi2);
    if (num == 0.0) return 0.0;
    return divide(p.sym, num, xi1, xi2, -(xi1 + xi2));
}

A4TildeParts a4_tilde(const EnergySymbolParams& p, double xi1, double xi2, double xi3) {
    A4TildeParts r;
    auto part = [&](double a, double b) {
        const double m = a + xi3;
        if (m == 0.0) return 0.0;
        return m * (b3_tilde(p, m, b) - b3_tilde(p, m, -a));
    };
    r.a41 = part(xi1, xi2);
    r.a42 = part(xi2, xi1);
    const double m = xi1 + xi2;
    r.a43 = m == 0.0 ? 0.0 : -m * b3_tilde(p, xi1, xi2);
    const std::array<double, 3> t{r.a41, r.a42, r.a43};
    r.total = exact_sum(t);
    return r;
}

double a44_tilde(const EnergySymbolParams& p, double xi1, double xi2) {
    const double m = xi1 + xi2;
    if (m == 0.0) return 0.0;
    return m * b3_tilde(p, xi1, xi2);
}

double c3_leading_term(const EnergySymbolParams& p, double xi1, double xi3) {
    const double d = xi1 * p.sym(xi3, 1);
    if (d == 0.0) throw ResonantDivision("xi1 omega'(xi3) vanishes");
    return xi3 * nu_tilde_sigma(xi3, p.sigma) / d;
}

}  // namespace nlb
