// quadrature.hpp
// Gauss-Legendre and (generalized) Gauss-Laguerre rules plus a small
// adaptive panel integrator.  Rules are cached; caches are mutex-guarded
// so concurrent readers are safe.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "eprw/constants.hpp"

namespace eprw {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
    // Newton iteration on Legendre P_n, nodes on (-1, 1).
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

inline GaussRule compute_gauss_laguerre(int n, double alpha, bool normalized) {
    // Golub-Welsch on the Jacobi matrix of the generalized Laguerre
    // polynomials; weight x^alpha e^{-x} on (0, inf).  With `normalized`
    // the weights sum to one (Gamma(alpha+1) factored out), which keeps
    // large alpha finite.
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + alpha + 1.0;
    for (int i = 1; i < n; ++i) sub[i - 1] = std::sqrt(i * (i + alpha));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_laguerre: eigen solve failed");
    double mu0 = normalized ? 1.0 : std::tgamma(alpha + 1.0);
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()[i];
        double v = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v * v;
    }
    return r;
}

}  // namespace detail

inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Generalized Gauss-Laguerre; weights normalized to sum 1 when
/// `normalized` (probability weights of a Gamma(alpha+1) density).
inline const GaussRule& gauss_laguerre(int n, double alpha = 0.0,
                                       bool normalized = false) {
    static std::map<std::tuple<int, double, bool>, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(n, alpha, normalized);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, detail::compute_gauss_laguerre(n, alpha, normalized)).first;
    return it->second;
}

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
}

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive bisection with a G16/G32 error estimate.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          int max_depth = 48) {
    const GaussRule& lo = gauss_legendre(16);
    const GaussRule& hi = gauss_legendre(32);
    struct Seg {
        double a, b, coarse;
        int depth;
    };
    std::vector<Seg> stack;
    stack.push_back({a, b, gauss_panel(f, a, b, lo), 0});
    double total = 0.0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double fine = gauss_panel(f, s.a, s.b, hi);
        double err = std::abs(fine - s.coarse);
        if (err < abs_tol * std::max(1e-3, (s.b - s.a) / (b - a)) ||
            s.depth >= max_depth) {
            if (s.depth >= max_depth && err > 64.0 * abs_tol)
                throw QuadratureError(
                    "integrate_adaptive: no convergence on [" +
                    std::to_string(s.a) + ", " + std::to_string(s.b) +
                    "], err=" + std::to_string(err));
            total += fine;
            continue;
        }
        double m = 0.5 * (s.a + s.b);
        stack.push_back({s.a, m, gauss_panel(f, s.a, m, lo), s.depth + 1});
        stack.push_back({m, s.b, gauss_panel(f, m, s.b, lo), s.depth + 1});
    }
    return total;
}

/// Composite Simpson weights for `n` equally spaced points (n odd).
inline std::vector<double> simpson_weights(int n, double h) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("simpson_weights: need odd n >= 3");
    std::vector<double> w(n, 0.0);
    for (int i = 0; i + 2 < n; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    return w;
}

}  // namespace eprw
