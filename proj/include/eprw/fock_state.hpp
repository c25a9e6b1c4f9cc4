// fock_state.hpp
// Two-mode states on a truncated Fock basis.  The density matrix is
// dense Hermitian with basis ordering |n_A> x |n_B>, row index
// m*dim_b + n.  States are value types; operations elsewhere in the
// library are pure functions of them.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "eprw/constants.hpp"

namespace eprw {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct TwoModeState {
    int dim_a = 0;
    int dim_b = 0;
    MatrixXcd rho;       // (dim_a*dim_b) x (dim_a*dim_b)
    bool converged = true;  // tail invariant satisfied

    int dim() const { return dim_a * dim_b; }
    int index(int m, int n) const { return m * dim_b + n; }

    double trace() const { return rho.trace().real(); }
    // Tr[rho^2] = |rho|_F^2 for Hermitian rho
    double purity() const { return rho.squaredNorm(); }

    double hermiticity_error() const {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    }

    /// Marginal photon-number populations of one mode.
    VectorXd mode_populations(int mode) const {
        int d = (mode == 0) ? dim_a : dim_b;
        VectorXd p = VectorXd::Zero(d);
        for (int m = 0; m < dim_a; ++m)
            for (int n = 0; n < dim_b; ++n) {
                double v = rho(index(m, n), index(m, n)).real();
                p[(mode == 0) ? m : n] += v;
            }
        return p;
    }

    /// Population of the top Fock level of a mode.
    double tail(int mode) const {
        VectorXd p = mode_populations(mode);
        return p[p.size() - 1];
    }

    double max_tail() const { return std::max(tail(0), tail(1)); }

    double mean_photons(int mode) const {
        VectorXd p = mode_populations(mode);
        double s = 0.0;
        for (int n = 0; n < p.size(); ++n) s += n * p[n];
        return s;
    }

    void normalize() {
        double t = trace();
        if (t <= 0.0) throw std::runtime_error("TwoModeState: nonpositive trace");
        rho /= t;
    }

    void rehermitize() { rho = 0.5 * (rho + rho.adjoint()).eval(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void refresh_converged(double tol = kTailTol) {
        converged = converged && (max_tail() <= tol);
    }
};

inline TwoModeState zero_state(int dim_a, int dim_b) {
    TwoModeState s;
    s.dim_a = dim_a;
    s.dim_b = dim_b;
    s.rho = MatrixXcd::Zero(dim_a * dim_b, dim_a * dim_b);
    return s;
}

/// Pure state from a two-mode amplitude matrix psi(m, n).
inline TwoModeState pure_state(const MatrixXcd& psi) {
    TwoModeState s;
    s.dim_a = static_cast<int>(psi.rows());
    s.dim_b = static_cast<int>(psi.cols());
    VectorXcd v(psi.size());
    for (int m = 0; m < s.dim_a; ++m)
        for (int n = 0; n < s.dim_b; ++n) v[s.index(m, n)] = psi(m, n);
    double norm = v.norm();
    if (norm <= 0.0) throw std::invalid_argument("pure_state: zero vector");
    v /= norm;
    s.rho = v * v.adjoint();
    return s;
}

/// c_k |n_A(k), n_B(k)> superposition.  Coefficients must already be
/// normalized; unnormalized input is rejected with a hint.
inline TwoModeState make_fock_superposition(
    const std::vector<std::tuple<int, int, complexd>>& coeffs,
    int min_dim = 4) {
    if (coeffs.empty())
        throw std::invalid_argument("make_fock_superposition: empty coefficient list");
    double norm2 = 0.0;
    int max_a = 0, max_b = 0;
    for (const auto& [na, nb, c] : coeffs) {
        if (na < 0 || nb < 0)
            throw std::invalid_argument("make_fock_superposition: negative index");
        norm2 += std::norm(c);
        max_a = std::max(max_a, na);
        max_b = std::max(max_b, nb);
    }
    if (std::abs(norm2 - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "make_fock_superposition: |c|^2 sums to " << norm2
            << "; divide coefficients by sqrt(" << norm2 << ")";
        throw std::invalid_argument(msg.str());
    }
    int da = std::max(min_dim, max_a + 2);
    int db = std::max(min_dim, max_b + 2);
    MatrixXcd psi = MatrixXcd::Zero(da, db);
    for (const auto& [na, nb, c] : coeffs) psi(na, nb) += c;
    return pure_state(psi);
}

/// Embed into larger cutoffs (no-op if already large enough).
inline TwoModeState pad_state(const TwoModeState& s, int dim_a, int dim_b) {
    dim_a = std::max(dim_a, s.dim_a);
    dim_b = std::max(dim_b, s.dim_b);
    if (dim_a == s.dim_a && dim_b == s.dim_b) return s;
    TwoModeState out = zero_state(dim_a, dim_b);
    out.converged = s.converged;
    for (int m = 0; m < s.dim_a; ++m)
        for (int n = 0; n < s.dim_b; ++n)
            for (int mp = 0; mp < s.dim_a; ++mp)
                for (int np = 0; np < s.dim_b; ++np)
                    out.rho(out.index(m, n), out.index(mp, np)) =
                        s.rho(s.index(m, n), s.index(mp, np));
    return out;
}

/// Drop Fock levels above the new cutoffs.  Trace loss is the caller's
/// responsibility to check.
inline TwoModeState truncate_state(const TwoModeState& s, int dim_a, int dim_b) {
    dim_a = std::min(dim_a, s.dim_a);
    dim_b = std::min(dim_b, s.dim_b);
    TwoModeState out = zero_state(dim_a, dim_b);
    out.converged = s.converged;
    for (int m = 0; m < dim_a; ++m)
        for (int n = 0; n < dim_b; ++n)
            for (int mp = 0; mp < dim_a; ++mp)
                for (int np = 0; np < dim_b; ++np)
                    out.rho(out.index(m, n), out.index(mp, np)) =
                        s.rho(s.index(m, n), s.index(mp, np));
    return out;
}

/// Same as the auto-sized constructor, but with caller-fixed cutoffs;
/// indices at or above a cutoff are rejected.
inline TwoModeState make_fock_superposition(
    const std::vector<std::tuple<int, int, complexd>>& coeffs, int dim_a,
    int dim_b) {
    for (const auto& [na, nb, c] : coeffs) {
        (void)c;
        if (na >= dim_a || nb >= dim_b)
            throw std::invalid_argument(
                "make_fock_superposition: index >= cutoff (" + std::to_string(na) +
                "," + std::to_string(nb) + ")");
    }
    TwoModeState s = make_fock_superposition(coeffs, 1);
    // The auto-sized state may carry empty margin levels; resize exactly.
    return pad_state(truncate_state(s, dim_a, dim_b), dim_a, dim_b);
}

inline TwoModeState tensor_product(const MatrixXcd& rho_a, const MatrixXcd& rho_b) {
    TwoModeState s = zero_state(static_cast<int>(rho_a.rows()),
                                static_cast<int>(rho_b.rows()));
    for (int m = 0; m < s.dim_a; ++m)
        for (int mp = 0; mp < s.dim_a; ++mp)
            for (int n = 0; n < s.dim_b; ++n)
                for (int np = 0; np < s.dim_b; ++np)
                    s.rho(s.index(m, n), s.index(mp, np)) = rho_a(m, mp) * rho_b(n, np);
    return s;
}

// ---- serialization -------------------------------------------------
// Text format: a header with dims and convention tag, then row-major
// complex entries at 17 significant digits (round-trips doubles).

inline void save_state(const TwoModeState& s, std::ostream& os) {
    os << "eprw-state 1\n";
    os << "convention " << kConventionTag << "\n";
    os << "dims " << s.dim_a << " " << s.dim_b << "\n";
    char buf[80];
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n",
                          s.rho(i, j).real(), s.rho(i, j).imag());
            os << buf;
        }
}

inline void save_state(const TwoModeState& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_state: cannot open " + path);
    save_state(s, f);
}

inline TwoModeState load_state(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "eprw-state" || version != 1)
        throw std::runtime_error("load_state: bad header");
    std::string key, conv;
    is >> key >> conv;
    if (key != "convention" || conv != kConventionTag)
        throw std::runtime_error("load_state: convention mismatch: " + conv);
    int da = 0, db = 0;
    is >> key >> da >> db;
    if (key != "dims" || da <= 0 || db <= 0)
        throw std::runtime_error("load_state: bad dims");
    TwoModeState s = zero_state(da, db);
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("load_state: truncated file");
            s.rho(i, j) = complexd(re, im);
        }
    return s;
}

inline TwoModeState load_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_state: cannot open " + path);
    return load_state(f);
}

}  // namespace eprw
