// baselines.hpp
// Second-moment reference criteria: the Simon partial-transpose test
// (necessary and sufficient for two-mode Gaussian states) and the Duan
// EPR-variance test.  Under the vacuum-variance-1/4 convention the
// Simon boundary sits at nu_minus = 1/4, with vacuum exactly on it.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "eprw/covariance.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/witness_bounds.hpp"

namespace eprw {

struct CovarianceReport {
    Matrix4d cov;
    Vector4d mean;
    double nu_minus = 0.0;    // smaller symplectic eigenvalue after PT
    double threshold = 0.25;  // separable iff nu_minus >= threshold
    bool entangled = false;
};

/// Smaller symplectic eigenvalue of the partially transposed covariance
/// matrix (P_B -> -P_B).
inline double pt_symplectic_eigenvalue(const Matrix4d& cov) {
    Eigen::Matrix2d A = cov.block<2, 2>(0, 0);
    Eigen::Matrix2d B = cov.block<2, 2>(2, 2);
    Eigen::Matrix2d C = cov.block<2, 2>(0, 2);
    double det_s = cov.determinant();
    double delta_pt = A.determinant() + B.determinant() - 2.0 * C.determinant();
    double disc = delta_pt * delta_pt - 4.0 * det_s;
    if (disc < -1e-12 * std::max(1.0, delta_pt * delta_pt))
        throw std::runtime_error("pt_symplectic_eigenvalue: unphysical covariance");
    double nu2 = 0.5 * (delta_pt - std::sqrt(std::max(0.0, disc)));
    if (nu2 < -1e-12)
        throw std::runtime_error("pt_symplectic_eigenvalue: negative eigenvalue");
    return std::sqrt(std::max(0.0, nu2));
}

inline CovarianceReport simon_test(const TwoModeState& rho) {
    CovarianceReport rep;
    auto cd = covariance_matrix(rho);
    rep.cov = cd.cov;
    rep.mean = cd.mean;
    rep.nu_minus = pt_symplectic_eigenvalue(cd.cov);
    rep.entangled = rep.nu_minus < rep.threshold - 1e-12;
    return rep;
}

struct DuanReport {
    double e1_prime = 0.0;  // Var(u') + Var(v')
    double bound = 0.0;     // (g^2 + 1/g^2)/2
    bool entangled = false;
};

/// Variance sum of u' = |g| X_A' - X_B'/g, v' = |g| P_A' + P_B'/g with
/// locally rotated quadratures, against the separable bound.
inline DuanReport duan_test(const TwoModeState& rho, double g = 1.0,
                            double phi_a = 0.0, double phi_b = 0.0) {
    if (g == 0.0) throw std::invalid_argument("duan_test: g must be nonzero");
    auto cd = covariance_matrix(rho);
    double ag = std::abs(g), ig = 1.0 / g;
    double ca = std::cos(phi_a), sa = std::sin(phi_a);
    double cb = std::cos(phi_b), sb = std::sin(phi_b);
    // rotated quadratures: X' = cos(phi) X - sin(phi) P, P' = sin(phi) X + cos(phi) P
    Vector4d u{ag * ca, -ag * sa, -ig * cb, ig * sb};
    Vector4d v{ag * sa, ag * ca, ig * sb, ig * cb};
    DuanReport rep;
    rep.e1_prime = u.dot(cd.cov * u) + v.dot(cd.cov * v);
    rep.bound = duan_bound(g);
    rep.entangled = rep.e1_prime < rep.bound - 1e-12;
    return rep;
}

}  // namespace eprw
