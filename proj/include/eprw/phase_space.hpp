// phase_space.hpp
// Phase-space representations of truncated Fock states: characteristic
// functions C(lambda) = Tr[rho D(lambda)], Wigner functions, and the
// trace-overlap formula Tr[rho sigma] = (1/pi) int C_rho(l) C_sigma(-l).
//
// The Wigner normalization is int W d^2alpha = 1 with vacuum
// W(alpha) = (2/pi) exp(-2|alpha|^2); alpha_x carries the X quadrature
// on the same scale as everywhere else (vacuum variance 1/4).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eprw/constants.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/quadrature.hpp"
#include "eprw/special_functions.hpp"
#include "eprw/transforms.hpp"

namespace eprw {

/// Diagonal displacement matrix element <n|D(lambda)|n>
///   = exp(-|lambda|^2/2) L_n(|lambda|^2).
inline double displacement_diagonal(int n, complexd lambda) {
    if (n < 0) throw std::invalid_argument("displacement_diagonal: n < 0");
    double x = std::norm(lambda);
    return std::exp(-0.5 * x) * laguerre(n, x);
}

struct PhaseSpaceGrid {
    double x0 = 0.0, dx = 0.0;
    int nx = 0;
    double y0 = 0.0, dy = 0.0;
    int ny = 0;
    std::vector<complexd> values;  // row-major, index ix*ny + iy
    bool ok = true;

    static PhaseSpaceGrid centered(double half_width, int points_per_axis) {
        if (points_per_axis % 2 == 0) ++points_per_axis;  // Simpson needs odd
        PhaseSpaceGrid g;
        g.nx = g.ny = points_per_axis;
        g.dx = g.dy = 2.0 * half_width / (points_per_axis - 1);
        g.x0 = g.y0 = -half_width;
        g.values.assign(static_cast<size_t>(g.nx) * g.ny, complexd{0.0, 0.0});
        return g;
    }

    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    complexd& at(int i, int j) { return values[static_cast<size_t>(i) * ny + j]; }
    complexd at(int i, int j) const { return values[static_cast<size_t>(i) * ny + j]; }

    /// Simpson integral of values over the grid.
    complexd integrate() const {
        auto wx = simpson_weights(nx, dx);
        auto wy = simpson_weights(ny, dy);
        complexd s{0.0, 0.0};
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) s += wx[i] * wy[j] * at(i, j);
        return s;
    }
};

inline MatrixXcd partial_trace_mode(const TwoModeState& s, int keep_mode) {
    int d = (keep_mode == 0) ? s.dim_a : s.dim_b;
    MatrixXcd out = MatrixXcd::Zero(d, d);
    if (keep_mode == 0) {
        for (int m = 0; m < s.dim_a; ++m)
            for (int mp = 0; mp < s.dim_a; ++mp)
                for (int n = 0; n < s.dim_b; ++n)
                    out(m, mp) += s.rho(s.index(m, n), s.index(mp, n));
    } else {
        for (int n = 0; n < s.dim_b; ++n)
            for (int np = 0; np < s.dim_b; ++np)
                for (int m = 0; m < s.dim_a; ++m)
                    out(n, np) += s.rho(s.index(m, n), s.index(m, np));
    }
    return out;
}

inline complexd characteristic_value(const MatrixXcd& rho_mode, complexd lambda) {
    int d = static_cast<int>(rho_mode.rows());
    MatrixXcd D = displacement_matrix(d, lambda);
    return (rho_mode * D).trace();
}

/// Reduced characteristic function of one mode sampled on a grid
/// (lambda = x + i y).  `ok` is cleared when the grid looks too small:
/// the self-overlap (1/pi) int |C|^2 must reproduce the mode purity.
inline PhaseSpaceGrid characteristic_function(const TwoModeState& s,
                                              PhaseSpaceGrid grid,
                                              int mode = 0) {
    MatrixXcd rm = partial_trace_mode(s, mode);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            grid.at(i, j) = characteristic_value(rm, complexd(grid.x(i), grid.y(j)));

    PhaseSpaceGrid sq = grid;
    for (auto& v : sq.values) v = std::norm(v);
    double self_overlap = sq.integrate().real() / kPi;
    double purity = (rm * rm).trace().real();
    grid.ok = std::abs(self_overlap - purity) <= 1e-4 * std::max(1.0, purity);
    return grid;
}

/// Tr[rho sigma] from characteristic grids on identical axes.
inline double overlap_from_characteristic(const PhaseSpaceGrid& a,
                                          const PhaseSpaceGrid& b) {
    if (a.nx != b.nx || a.ny != b.ny || a.dx != b.dx || a.x0 != b.x0 ||
        a.dy != b.dy || a.y0 != b.y0)
        throw std::invalid_argument("overlap_from_characteristic: grid mismatch");
    auto wx = simpson_weights(a.nx, a.dx);
    auto wy = simpson_weights(a.ny, a.dy);
    complexd s{0.0, 0.0};
    for (int i = 0; i < a.nx; ++i)
        for (int j = 0; j < a.ny; ++j) {
            // C_b(-lambda): the centered grid maps (i,j) -> mirrored index
            int mi = a.nx - 1 - i, mj = a.ny - 1 - j;
            s += wx[i] * wy[j] * a.at(i, j) * b.at(mi, mj);
        }
    return s.real() / kPi;
}

/// Rank-decomposed evaluator for the two-mode characteristic function
/// C_AB(lambda_A, lambda_B) = Tr[rho D(lambda_A) x D(lambda_B)].
class TwoModeCharEvaluator {
  public:
    explicit TwoModeCharEvaluator(const TwoModeState& s, double weight_cut = 1e-14)
        : dim_a_(s.dim_a), dim_b_(s.dim_b) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(s.rho);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("TwoModeCharEvaluator: eigen solve failed");
        for (int r = 0; r < es.eigenvalues().size(); ++r) {
            double w = es.eigenvalues()[r];
            if (std::abs(w) < weight_cut) continue;
            weights_.push_back(w);
            MatrixXcd psi(dim_a_, dim_b_);
            for (int m = 0; m < dim_a_; ++m)
                for (int n = 0; n < dim_b_; ++n)
                    psi(m, n) = es.eigenvectors()(s.index(m, n), r);
            vectors_.push_back(std::move(psi));
        }
    }

    complexd operator()(complexd lambda_a, complexd lambda_b) const {
        MatrixXcd Da = displacement_matrix(dim_a_, lambda_a);
        MatrixXcd Db = displacement_matrix(dim_b_, lambda_b);
        complexd out{0.0, 0.0};
        for (size_t r = 0; r < weights_.size(); ++r) {
            // <psi| Da x Db |psi> = sum conj(Psi) .* (Da Psi Db^T)
            MatrixXcd t = Da * vectors_[r] * Db.transpose();
            out += weights_[r] * (vectors_[r].conjugate().cwiseProduct(t)).sum();
        }
        return out;
    }

    int rank() const { return static_cast<int>(weights_.size()); }

  private:
    int dim_a_, dim_b_;
    std::vector<double> weights_;
    std::vector<MatrixXcd> vectors_;
};

// ---- Wigner functions ------------------------------------------------

/// Wigner kernel of |m><n|.
inline complexd fock_wigner_kernel(int m, int n, complexd alpha) {
    double x4 = 4.0 * std::norm(alpha);
    if (m >= n) {
        double mag = (2.0 / kPi) * ((n % 2) ? -1.0 : 1.0) *
                     std::exp(0.5 * (log_factorial(n) - log_factorial(m))) *
                     std::exp(-2.0 * std::norm(alpha)) * assoc_laguerre(n, m - n, x4);
        return mag * std::pow(2.0 * std::conj(alpha), m - n);
    }
    return std::conj(fock_wigner_kernel(n, m, alpha));
}

inline double wigner_value(const MatrixXcd& rho_mode, complexd alpha) {
    int d = static_cast<int>(rho_mode.rows());
    complexd s{0.0, 0.0};
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            s += rho_mode(m, n) * fock_wigner_kernel(m, n, alpha);
    return s.real();
}

inline double wigner_value_two_mode(const TwoModeState& s, complexd alpha,
                                    complexd beta) {
    // Cache the one-mode kernels, then contract with the density matrix.
    Eigen::MatrixXcd ka(s.dim_a, s.dim_a), kb(s.dim_b, s.dim_b);
    for (int m = 0; m < s.dim_a; ++m)
        for (int mp = 0; mp < s.dim_a; ++mp)
            ka(m, mp) = fock_wigner_kernel(m, mp, alpha);
    for (int n = 0; n < s.dim_b; ++n)
        for (int np = 0; np < s.dim_b; ++np)
            kb(n, np) = fock_wigner_kernel(n, np, beta);
    complexd out{0.0, 0.0};
    for (int m = 0; m < s.dim_a; ++m)
        for (int n = 0; n < s.dim_b; ++n)
            for (int mp = 0; mp < s.dim_a; ++mp)
                for (int np = 0; np < s.dim_b; ++np)
                    out += s.rho(s.index(m, n), s.index(mp, np)) * ka(m, mp) * kb(n, np);
    return out.real();
}

}  // namespace eprw
