// state_catalog.hpp
// Constructors for the two-mode state families used throughout:
// dephased cat pairs, two-mode squeezed states with optional photon
// addition/subtraction on both modes, and simple product states.
// Cutoffs start at max(16, ceil(8 * mean photons)) and double until the
// tail invariant holds.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "eprw/constants.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/transforms.hpp"

namespace eprw {

struct CatSpec {
    double nu = 0.0;  // coherent amplitude >= 0
    double p = 0.0;   // dephasing parameter in [0, 1]
};

struct TmssSpec {
    enum class Operation { None, SubtractBoth, AddBoth };
    double s = 0.0;  // squeezing parameter >= 0
    Operation operation = Operation::None;
};

inline VectorXcd coherent_state_vector(int d, complexd alpha) {
    return displacement_matrix(d, alpha).col(0);
}

inline MatrixXcd thermal_state_matrix(int d, double n_mean) {
    if (n_mean < 0.0) throw std::invalid_argument("thermal_state_matrix: n_mean < 0");
    MatrixXcd rho = MatrixXcd::Zero(d, d);
    double q = n_mean / (1.0 + n_mean);
    double w = 1.0 / (1.0 + n_mean);
    for (int n = 0; n < d; ++n) {
        rho(n, n) = w;
        w *= q;
    }
    return rho;
}

inline TwoModeState vacuum_two_mode(int dim_a = 4, int dim_b = 4) {
    MatrixXcd psi = MatrixXcd::Zero(dim_a, dim_b);
    psi(0, 0) = 1.0;
    return pure_state(psi);
}

inline TwoModeState coherent_product(complexd alpha_a, complexd alpha_b,
                                     int min_dim = 8) {
    auto dim_for = [min_dim](complexd a) {
        double n = std::norm(a);
        int d = std::max<int>(min_dim, static_cast<int>(std::ceil(n + 7.0 * std::sqrt(n + 1.0) + 8.0)));
        return std::min(d, kMaxModeDim);
    };
    int da = dim_for(alpha_a), db = dim_for(alpha_b);
    MatrixXcd psi = coherent_state_vector(da, alpha_a) *
                    coherent_state_vector(db, alpha_b).transpose();
    TwoModeState s = pure_state(psi);
    s.refresh_converged();
    return s;
}

/// rho ~ |nu,nu><nu,nu| + |-nu,-nu><-nu,-nu|
///        - p (|nu,nu><-nu,-nu| + h.c.),  normalized.
/// The unnormalized trace is 2 - 2 p exp(-4 nu^2).
inline TwoModeState make_dephased_cat(const CatSpec& spec) {
    if (spec.p < 0.0 || spec.p > 1.0)
        throw std::invalid_argument("make_dephased_cat: p must lie in [0, 1]");
    if (spec.nu < 0.0)
        throw std::invalid_argument("make_dephased_cat: nu must be >= 0");

    double nbar = spec.nu * spec.nu;
    int d = std::max(16, static_cast<int>(std::ceil(8.0 * nbar)));
    for (;;) {
        VectorXcd plus = coherent_state_vector(d, spec.nu);
        VectorXcd minus = coherent_state_vector(d, -spec.nu);
        VectorXcd psi_pp(d * d), psi_mm(d * d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                psi_pp[m * d + n] = plus[m] * plus[n];
                psi_mm[m * d + n] = minus[m] * minus[n];
            }
        TwoModeState s = zero_state(d, d);
        s.rho = psi_pp * psi_pp.adjoint() + psi_mm * psi_mm.adjoint() -
                spec.p * (psi_pp * psi_mm.adjoint() + psi_mm * psi_pp.adjoint());
        s.normalize();
        s.converged = true;
        s.refresh_converged();
        if (s.converged || d >= kMaxModeDim) return s;
        d = std::min(kMaxModeDim, 2 * d);
    }
}

/// |TMSS> = sqrt(1 - t^2) sum t^n |n n>, t = tanh(s), optionally with
/// a a or a^dag a^dag applied to both modes and renormalized.
inline TwoModeState make_tmss(const TmssSpec& spec) {
    if (spec.s < 0.0) throw std::invalid_argument("make_tmss: s must be >= 0");
    double t = std::tanh(spec.s);
    if (spec.operation == TmssSpec::Operation::SubtractBoth && t == 0.0)
        throw std::invalid_argument("make_tmss: subtraction annihilates s = 0");

    double nbar = std::sinh(spec.s) * std::sinh(spec.s);
    int d = std::max(16, static_cast<int>(std::ceil(8.0 * nbar)));
    for (;;) {
        MatrixXcd psi = MatrixXcd::Zero(d, d);
        for (int n = 0; n < d; ++n) {
            double amp;
            switch (spec.operation) {
                case TmssSpec::Operation::None:
                    amp = std::pow(t, n);
                    break;
                case TmssSpec::Operation::SubtractBoth:
                    amp = (n + 1.0) * std::pow(t, n + 1);
                    break;
                case TmssSpec::Operation::AddBoth:
                    amp = (n == 0) ? 0.0 : n * std::pow(t, n - 1);
                    break;
                default:
                    throw std::logic_error("make_tmss: bad operation");
            }
            psi(n, n) = amp;
        }
        TwoModeState s = pure_state(psi);
        s.refresh_converged();
        if (s.converged || d >= kMaxModeDim) return s;
        d = std::min(kMaxModeDim, 2 * d);
    }
}

/// Squeezing parameter of the plain TMSS whose total mean photon number
/// matches the given state (the energy-matched Gaussian reference).
inline double energy_matched_tmss_s(const TwoModeState& s) {
    double per_mode = 0.5 * (s.mean_photons(0) + s.mean_photons(1));
    return std::asinh(std::sqrt(per_mode));
}

}  // namespace eprw
