// covariance.hpp
// First and second quadrature moments of two-mode states, ordered
// (X_A, P_A, X_B, P_B).  Second moments are symmetrized central moments,
// so vacuum x vacuum gives diag(1/4, 1/4, 1/4, 1/4).

#pragma once

#include <Eigen/Dense>
#include <array>

#include "eprw/constants.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/transforms.hpp"

namespace eprw {

using Eigen::Matrix4d;
using Eigen::Vector4d;

/// Tr[rho (A x B)] for one-mode operators A, B.
inline complexd expect_two_mode(const TwoModeState& s, const MatrixXcd& A,
                                const MatrixXcd& B) {
    // Contract mode B first: G(m, m') = sum_{n n'} rho[(m n), (m' n')] B(n', n).
    MatrixXcd G = MatrixXcd::Zero(s.dim_a, s.dim_a);
    for (int m = 0; m < s.dim_a; ++m)
        for (int mp = 0; mp < s.dim_a; ++mp) {
            complexd acc{0.0, 0.0};
            for (int n = 0; n < s.dim_b; ++n)
                for (int np = 0; np < s.dim_b; ++np)
                    acc += s.rho(s.index(m, n), s.index(mp, np)) * B(np, n);
            G(m, mp) = acc;
        }
    return (G * A).trace();
}

struct CovarianceData {
    Matrix4d cov;
    Vector4d mean;
};

inline CovarianceData covariance_matrix(const TwoModeState& s) {
    MatrixXcd Xa = quadrature_x_matrix(s.dim_a), Pa = quadrature_p_matrix(s.dim_a);
    MatrixXcd Xb = quadrature_x_matrix(s.dim_b), Pb = quadrature_p_matrix(s.dim_b);
    MatrixXcd Ia = MatrixXcd::Identity(s.dim_a, s.dim_a);
    MatrixXcd Ib = MatrixXcd::Identity(s.dim_b, s.dim_b);

    std::array<const MatrixXcd*, 4> op_a = {&Xa, &Pa, &Ia, &Ia};
    std::array<const MatrixXcd*, 4> op_b = {&Ib, &Ib, &Xb, &Pb};

    CovarianceData out;
    for (int i = 0; i < 4; ++i)
        out.mean[i] = expect_two_mode(s, *op_a[i], *op_b[i]).real();

    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            // Symmetrized second moment of operators i and j.
            MatrixXcd A, B;
            if (i < 2 && j < 2) {
                A = 0.5 * ((*op_a[i]) * (*op_a[j]) + (*op_a[j]) * (*op_a[i]));
                B = Ib;
            } else if (i >= 2 && j >= 2) {
                A = Ia;
                B = 0.5 * ((*op_b[i]) * (*op_b[j]) + (*op_b[j]) * (*op_b[i]));
            } else {
                A = *op_a[i];
                B = *op_b[j];
            }
            double second = expect_two_mode(s, A, B).real();
            double c = second - out.mean[i] * out.mean[j];
            out.cov(i, j) = c;
            out.cov(j, i) = c;
        }
    return out;
}

/// Analytic covariance map of the thermal attenuation channel applied to
/// both modes: sigma -> eta sigma + (1 - eta)(n_th + 1/2)/2 * I, means
/// scale by sqrt(eta).
inline CovarianceData gaussian_loss_thermal_map(const CovarianceData& in,
                                                double eta, double n_th) {
    CovarianceData out;
    out.cov = eta * in.cov +
              (1.0 - eta) * (n_th + 0.5) * 0.5 * Matrix4d::Identity();
    out.mean = std::sqrt(eta) * in.mean;
    return out;
}

}  // namespace eprw
