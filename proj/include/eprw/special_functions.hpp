// special_functions.hpp
// Laguerre polynomials, harmonic-oscillator eigenfunctions in the
// vacuum-variance-1/4 convention, and small helpers shared by the
// phase-space and bound integrals.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eprw/constants.hpp"

namespace eprw {

inline double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: n < 0");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

/// L_0..L_nmax at a fixed argument.
inline std::vector<double> laguerre_all(int nmax, double x) {
    std::vector<double> out(static_cast<size_t>(nmax) + 1);
    out[0] = 1.0;
    if (nmax == 0) return out;
    out[1] = 1.0 - x;
    for (int k = 1; k < nmax; ++k)
        out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
    return out;
}

/// Associated Laguerre L_n^(a)(x), integer a >= 0.
inline double assoc_laguerre(int n, int a, double x) {
    if (n < 0 || a < 0) throw std::invalid_argument("assoc_laguerre: bad order");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        double lp1 = ((2.0 * k + 1.0 + a - x) * l - (k + a) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

// Oscillator eigenfunctions psi_n with <x|n> real and Var_vac(X) = 1/4:
//   psi_n(x) = 2^(1/4) phi_n(sqrt(2) x),
// phi_n the unit-variance-1/2 Hermite functions.  Momentum-space
// wavefunctions are <p|n> = (-i)^n psi_n(p).

/// psi_0..psi_nmax at one point.  Stable normalized recurrence.
inline void hermite_psi_all(int nmax, double x, double* out) {
    const double u = std::sqrt(2.0) * x;
    const double scale = std::pow(2.0, 0.25) * std::pow(kPi, -0.25);
    double f0 = scale * std::exp(-0.5 * u * u);
    out[0] = f0;
    if (nmax == 0) return;
    out[1] = std::sqrt(2.0) * u * f0;
    for (int n = 1; n < nmax; ++n)
        out[n + 1] = std::sqrt(2.0 / (n + 1.0)) * u * out[n] -
                     std::sqrt(n / (n + 1.0)) * out[n - 1];
}

inline std::vector<double> hermite_psi_all(int nmax, double x) {
    std::vector<double> out(static_cast<size_t>(nmax) + 1);
    hermite_psi_all(nmax, x, out.data());
    return out;
}

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }

}  // namespace eprw
