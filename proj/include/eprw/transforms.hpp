// transforms.hpp
// Mode transformations on truncated Fock states: phase shifts,
// displacements, and the 50:50 beam splitter.
//
// Sign conventions, fixed once for the whole library:
//   phase_shift(phi):  rho -> U rho U^dag with U = exp(i phi n), so the
//     fixed X quadrature of the transformed state realizes
//     X' = cos(phi) X - sin(phi) P of the original.
//   beam_splitter_50_50:  U^dag a_A U = (a_A - a_B)/sqrt(2),
//     U^dag a_B U = (a_A + a_B)/sqrt(2).  Measuring X on output A and P
//     on output B therefore realizes (X_A - X_B)/sqrt(2) and
//     (P_A + P_B)/sqrt(2).
//   displacement(alpha):  U = exp(alpha a^dag - conj(alpha) a).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "eprw/constants.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/special_functions.hpp"

namespace eprw {

struct ModeTransform {
    enum class Kind { PhaseShift, BeamSplitter5050, Displacement };
    Kind kind;
    int target = 0;          // mode index for phase/displacement
    double phi = 0.0;        // phase shift
    complexd alpha{0.0, 0.0};  // displacement amplitude

    static ModeTransform phase_shift(double phi, int mode) {
        return {Kind::PhaseShift, mode, phi, {}};
    }
    static ModeTransform beam_splitter_50_50() {
        return {Kind::BeamSplitter5050, 0, 0.0, {}};
    }
    static ModeTransform displacement(complexd alpha, int mode) {
        return {Kind::Displacement, mode, 0.0, alpha};
    }
};

// ---- one-mode operators ---------------------------------------------

inline MatrixXcd annihilation_matrix(int d) {
    MatrixXcd a = MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline MatrixXcd quadrature_x_matrix(int d) {
    MatrixXcd a = annihilation_matrix(d);
    return 0.5 * (a + a.adjoint());
}

inline MatrixXcd quadrature_p_matrix(int d) {
    MatrixXcd a = annihilation_matrix(d);
    return (a - a.adjoint()) / (2.0 * kI);
}

/// Truncated matrix of exp(alpha a^dag - conj(alpha) a) from the exact
/// (untruncated) matrix elements.
inline MatrixXcd displacement_matrix(int d, complexd alpha) {
    MatrixXcd D = MatrixXcd::Identity(d, d);
    const double r = std::abs(alpha);
    if (r == 0.0) return D;
    const double x = r * r;
    const complexd ph = alpha / r;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            int k = std::abs(m - n);
            int lo = std::min(m, n);
            double mag = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + k)) +
                                  k * std::log(r) - 0.5 * x) *
                         assoc_laguerre(lo, k, x);
            if (m >= n)
                D(m, n) = mag * std::pow(ph, k);
            else
                D(m, n) = mag * std::pow(-std::conj(ph), k);
        }
    return D;
}

// ---- mode-wise conjugation ------------------------------------------

/// Exchange the two modes of the density matrix.
inline TwoModeState swap_modes(const TwoModeState& s) {
    TwoModeState out = zero_state(s.dim_b, s.dim_a);
    out.converged = s.converged;
    for (int m = 0; m < s.dim_a; ++m)
        for (int n = 0; n < s.dim_b; ++n)
            for (int mp = 0; mp < s.dim_a; ++mp)
                for (int np = 0; np < s.dim_b; ++np)
                    out.rho(out.index(n, m), out.index(np, mp)) =
                        s.rho(s.index(m, n), s.index(mp, np));
    return out;
}

/// rho -> (I x M) rho (I x M^dag)
inline TwoModeState conjugate_mode_b(const TwoModeState& s, const MatrixXcd& M) {
    if (M.rows() != s.dim_b || M.cols() != s.dim_b)
        throw std::invalid_argument("conjugate_mode_b: dimension mismatch");
    TwoModeState out = zero_state(s.dim_a, s.dim_b);
    out.converged = s.converged;
    const int db = s.dim_b;
    MatrixXcd Mh = M.adjoint();
    for (int m = 0; m < s.dim_a; ++m)
        for (int mp = 0; mp < s.dim_a; ++mp)
            out.rho.block(m * db, mp * db, db, db).noalias() =
                M * s.rho.block(m * db, mp * db, db, db) * Mh;
    return out;
}

/// rho -> (M x I) rho (M^dag x I)
inline TwoModeState conjugate_mode_a(const TwoModeState& s, const MatrixXcd& M) {
    return swap_modes(conjugate_mode_b(swap_modes(s), M));
}

inline TwoModeState conjugate_mode(const TwoModeState& s, const MatrixXcd& M, int mode) {
    return (mode == 0) ? conjugate_mode_a(s, M) : conjugate_mode_b(s, M);
}

/// Phase shift exp(i phi n) on one mode, applied in place of a full
/// conjugation (diagonal unitary).
inline TwoModeState apply_phase_shift(const TwoModeState& s, double phi, int mode) {
    TwoModeState out = s;
    if (phi == 0.0) return out;
    for (int m = 0; m < s.dim_a; ++m)
        for (int n = 0; n < s.dim_b; ++n)
            for (int mp = 0; mp < s.dim_a; ++mp)
                for (int np = 0; np < s.dim_b; ++np) {
                    int k = (mode == 0) ? (m - mp) : (n - np);
                    if (k != 0)
                        out.rho(s.index(m, n), s.index(mp, np)) *=
                            std::exp(kI * (phi * k));
                }
    return out;
}

// ---- beam splitter ---------------------------------------------------

namespace detail {

/// exp(theta K) on the total-photon-number-N subspace, basis
/// |k, N-k>, K = a1^dag a2 - a1 a2^dag.  Real orthogonal.
inline MatrixXd compute_bs_block(int N, double theta) {
    int n = N + 1;
    MatrixXcd H = MatrixXcd::Zero(n, n);  // H = i K, Hermitian
    for (int k = 0; k + 1 < n; ++k) {
        double c = std::sqrt(static_cast<double>(k + 1) * (N - k));
        H(k + 1, k) = kI * c;
        H(k, k + 1) = -kI * c;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    VectorXcd phases(n);
    for (int i = 0; i < n; ++i)
        phases[i] = std::exp(-kI * (theta * es.eigenvalues()[i]));
    MatrixXcd U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return U.real();
}

inline const MatrixXd& bs_block(int N, double theta) {
    static std::map<std::pair<int, std::uint64_t>, MatrixXd> cache;
    static std::mutex mtx;
    std::uint64_t bits;
    std::memcpy(&bits, &theta, sizeof(bits));
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(N, bits);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, compute_bs_block(N, theta)).first;
    return it->second;
}

}  // namespace detail

/// Two-mode beam splitter exp(theta (a_A^dag a_B - a_A a_B^dag)) applied
/// blockwise over total photon number.  Blocks cut by the truncation
/// lose trace; callers check tails.
inline TwoModeState apply_beam_splitter(const TwoModeState& s, double theta) {
    const int da = s.dim_a, db = s.dim_b;
    const int nblocks = da + db - 1;

    // Gather basis indices per block.
    std::vector<std::vector<int>> members(nblocks);   // flat (m,n) indices
    std::vector<std::vector<int>> klist(nblocks);     // photon count in mode A
    for (int N = 0; N < nblocks; ++N) {
        int klo = std::max(0, N - (db - 1));
        int khi = std::min(da - 1, N);
        for (int k = klo; k <= khi; ++k) {
            members[N].push_back(k * db + (N - k));
            klist[N].push_back(k);
        }
    }

    // Restricted unitary blocks.
    std::vector<MatrixXd> ublk(nblocks);
    for (int N = 0; N < nblocks; ++N) {
        const MatrixXd& full = detail::bs_block(N, theta);
        int b = static_cast<int>(members[N].size());
        ublk[N].resize(b, b);
        for (int i = 0; i < b; ++i)
            for (int j = 0; j < b; ++j)
                ublk[N](i, j) = full(klist[N][i], klist[N][j]);
    }

    TwoModeState out = zero_state(da, db);
    out.converged = s.converged;
    MatrixXcd tmp;
    for (int N = 0; N < nblocks; ++N) {
        int bn = static_cast<int>(members[N].size());
        for (int Np = 0; Np < nblocks; ++Np) {
            int bm = static_cast<int>(members[Np].size());
            MatrixXcd blockin(bn, bm);
            for (int i = 0; i < bn; ++i)
                for (int j = 0; j < bm; ++j)
                    blockin(i, j) = s.rho(members[N][i], members[Np][j]);
            tmp.noalias() = ublk[N] * blockin * ublk[Np].transpose();
            for (int i = 0; i < bn; ++i)
                for (int j = 0; j < bm; ++j)
                    out.rho(members[N][i], members[Np][j]) = tmp(i, j);
        }
    }
    return out;
}

inline constexpr double kBs5050Theta = -kPi / 4.0;

// ---- generic apply with adaptive padding ----------------------------

namespace detail {

template <class ApplyFn>
TwoModeState apply_with_tail_guard(const TwoModeState& s, int pad_a, int pad_b,
                                   const ApplyFn& fn) {
    TwoModeState cur = pad_state(s, std::min(kMaxModeDim, s.dim_a + pad_a),
                                 std::min(kMaxModeDim, s.dim_b + pad_b));
    for (;;) {
        TwoModeState out = fn(cur);
        out.refresh_converged();
        if (out.converged || (cur.dim_a >= kMaxModeDim && cur.dim_b >= kMaxModeDim))
            return out;
        int na = std::min(kMaxModeDim, cur.dim_a + std::max(4, cur.dim_a / 2));
        int nb = std::min(kMaxModeDim, cur.dim_b + std::max(4, cur.dim_b / 2));
        cur = pad_state(cur, na, nb);
    }
}

}  // namespace detail

/// rho' = U rho U^dag in the truncated basis, padding cutoffs until the
/// tail invariant holds (or the cap is hit, which clears `converged`).
inline TwoModeState apply_transform(const TwoModeState& s, const ModeTransform& t) {
    switch (t.kind) {
        case ModeTransform::Kind::PhaseShift:
            return apply_phase_shift(s, t.phi, t.target);
        case ModeTransform::Kind::BeamSplitter5050: {
            // Blocks cut by the truncation lose trace; the top-level tail
            // alone under-detects that, so guard the trace directly.
            int pad = std::max(2, (std::max(s.dim_a, s.dim_b) + 1) / 2);
            TwoModeState cur = pad_state(s, std::min(kMaxModeDim, s.dim_a + pad),
                                         std::min(kMaxModeDim, s.dim_b + pad));
            for (;;) {
                TwoModeState out = apply_beam_splitter(cur, kBs5050Theta);
                double deficit = std::abs(out.trace() - cur.trace());
                out.converged = out.converged && deficit <= 1e-9;
                out.refresh_converged();
                if (out.converged ||
                    (cur.dim_a >= kMaxModeDim && cur.dim_b >= kMaxModeDim))
                    return out;
                int na = std::min(kMaxModeDim, cur.dim_a + std::max(4, cur.dim_a / 2));
                int nb = std::min(kMaxModeDim, cur.dim_b + std::max(4, cur.dim_b / 2));
                cur = pad_state(cur, na, nb);
            }
        }
        case ModeTransform::Kind::Displacement: {
            double r = std::abs(t.alpha);
            int pad = static_cast<int>(std::ceil(r * r + 6.0 * r + 6.0));
            int mode = t.target;
            complexd alpha = t.alpha;
            return detail::apply_with_tail_guard(
                s, mode == 0 ? pad : 0, mode == 1 ? pad : 0,
                [mode, alpha](const TwoModeState& x) {
                    int d = (mode == 0) ? x.dim_a : x.dim_b;
                    return conjugate_mode(x, displacement_matrix(d, alpha), mode);
                });
        }
    }
    throw std::logic_error("apply_transform: unknown kind");
}

}  // namespace eprw
