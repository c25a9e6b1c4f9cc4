// witness_bounds.hpp
// Separability bounds for functional EPR witnesses.  For a test function
// F the bound sequence is
//
//   O_n = 4 int_0^inf dx dy F(2 x^2) e^{-y^2/2} L_n(y^2) J_0(2 x y) x y,
//
// whose extrema over n bound <F(O_EPR)> on every separable state.  The
// inner Hankel integral reduces the double integral to
//
//   O_n = (-1)^n int_0^inf F(z) e^{-z} L_n(2 z) dz,
//
// which is the production path: for the supported families (exponential
// times polynomial, and pure powers) the integrand is a polynomial under
// the e^{-z} weight after substitution, so Gauss-Laguerre evaluates it
// exactly.  The raw 2D quadrature is kept as a slow cross-validation
// oracle, and the exponential-linear family has a closed form.
//
// Gain-generalized EPR operators (u' = |g| X_A - X_B / g, ...) rescale
// the argument: F(z) -> F((g^2 + 1/g^2) z / 2).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "eprw/quadrature.hpp"
#include "eprw/special_functions.hpp"

namespace eprw {

struct TestFunction {
    // exponential family: F(z) = exp(-C z) (1 + sum_m poly[m-1] z^m)
    // power form:         F(z) = scale * z^power
    double C = 0.0;
    std::vector<double> poly;
    bool power_form = false;
    int power_degree = 0;
    double scale = 1.0;

    static TestFunction exponential(double C, std::vector<double> D = {}) {
        if (C < 0.0)
            throw std::invalid_argument("TestFunction: decay rate C must be >= 0");
        if (C == 0.0 && !D.empty())
            throw std::invalid_argument("TestFunction: polynomial part needs C > 0");
        TestFunction f;
        f.C = C;
        f.poly = std::move(D);
        return f;
    }

    static TestFunction power(int m, double scale = 1.0) {
        if (m < 0) throw std::invalid_argument("TestFunction: power must be >= 0");
        TestFunction f;
        f.power_form = true;
        f.power_degree = m;
        f.scale = scale;
        return f;
    }

    double operator()(double z) const {
        if (power_form) return scale * std::pow(z, power_degree);
        double p = 1.0;
        double zk = 1.0;
        for (double d : poly) {
            zk *= z;
            p += d * zk;
        }
        return std::exp(-C * z) * p;
    }

    int poly_degree() const {
        return power_form ? power_degree : static_cast<int>(poly.size());
    }

    /// F, F', F'' at z (for quadrature with local moment corrections).
    void eval_with_derivs(double z, double out[3]) const {
        if (power_form) {
            int m = power_degree;
            out[0] = scale * std::pow(z, m);
            out[1] = (m >= 1) ? scale * m * std::pow(z, m - 1) : 0.0;
            out[2] = (m >= 2) ? scale * m * (m - 1.0) * std::pow(z, m - 2) : 0.0;
            return;
        }
        double p = 1.0, dp = 0.0, ddp = 0.0;
        double pw1 = 1.0;  // z^{m-1}
        double pw2 = 0.0;  // z^{m-2}
        for (size_t m = 1; m <= poly.size(); ++m) {
            double d = poly[m - 1];
            p += d * pw1 * z;
            dp += d * m * pw1;
            if (m >= 2) ddp += d * m * (m - 1.0) * pw2;
            pw2 = pw1;
            pw1 *= z;
        }
        double e = std::exp(-C * z);
        out[0] = e * p;
        out[1] = e * (dp - C * p);
        out[2] = e * (ddp - 2.0 * C * dp + C * C * p);
    }

    /// F((g^2 + 1/g^2)/2 * z): the same family with rescaled parameters.
    TestFunction gain_rescaled(double g) const {
        if (g == 0.0) throw std::invalid_argument("TestFunction: gain must be nonzero");
        double k = 0.5 * (g * g + 1.0 / (g * g));
        TestFunction f = *this;
        if (power_form) {
            f.scale *= std::pow(k, power_degree);
        } else {
            f.C *= k;
            double km = 1.0;
            for (auto& d : f.poly) {
                km *= k;
                d *= km;
            }
        }
        return f;
    }

    /// F^2, needed for the witness variance; stays inside the family.
    TestFunction squared() const {
        TestFunction f;
        if (power_form) {
            f.power_form = true;
            f.power_degree = 2 * power_degree;
            f.scale = scale * scale;
            return f;
        }
        f.C = 2.0 * C;
        int M = static_cast<int>(poly.size());
        f.poly.assign(2 * M, 0.0);
        for (int k = 1; k <= 2 * M; ++k) {
            double c = 0.0;
            if (k <= M) c += 2.0 * poly[k - 1];
            for (int i = 1; i < k; ++i)
                if (i <= M && (k - i) <= M) c += poly[i - 1] * poly[k - i - 1];
            f.poly[k - 1] = c;
        }
        while (!f.poly.empty() && f.poly.back() == 0.0) f.poly.pop_back();
        return f;
    }
};

namespace detail {

inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

/// Exact value of the monomial reduction integral
///   I_j(n) = (-1)^j d^j/dp^j [ (p-2)^n / p^{n+1} ],  p = 1 + C,
/// i.e. int z^j e^{-(1+C) z} L_n(2z) dz, as a stable (j+1)-term sum.
/// All terms share the geometric factor r^{n-i}, r = (C-1)/(C+1), so no
/// large cancellations occur (unlike numerical quadrature of the same
/// integral, whose integrand peaks at ~2^n for small C).
inline double reduction_monomial_integral(double C, int j, int n) {
    const double p = 1.0 + C;
    const double r = (C - 1.0) / p;
    double sum = 0.0;
    double binom = 1.0;  // binom(j, i)
    for (int i = 0; i <= std::min(j, n); ++i) {
        if (i > 0) binom *= static_cast<double>(j - i + 1) / i;
        double fall = 1.0;  // n (n-1) ... (n-i+1)
        for (int t = 0; t < i; ++t) fall *= n - t;
        double rise = 1.0;  // (n+1) (n+2) ... (n+j-i)
        for (int t = 1; t <= j - i; ++t) rise *= n + t;
        double sgn = ((j - i) % 2) ? -1.0 : 1.0;
        sum += binom * fall * sgn * rise * ipow(r, n - i);
    }
    double dj = sum / ipow(p, j + 1);
    return ((j % 2) ? -1.0 : 1.0) * dj;
}

/// Numerical Gauss-Laguerre evaluation of the reduced integral.  Exact
/// degree-wise, but the alternating integrand makes it useless past
/// n ~ 25 for small C; kept as an independent check at small n.
inline double bound_reduction_gauss_laguerre(const TestFunction& f, int n) {
    int deg = f.poly_degree() + n;
    int K = std::max(48, deg / 2 + 8);
    const auto& rule = gauss_laguerre(K);
    double sign = (n % 2) ? -1.0 : 1.0;
    double acc = 0.0;
    if (f.power_form) {
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double z = rule.nodes[i];
            acc += rule.weights[i] * f.scale * std::pow(z, f.power_degree) *
                   laguerre(n, 2.0 * z);
        }
    } else {
        // substitute w = (1 + C) z so the weight absorbs the exponential
        double p = 1.0 + f.C;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double z = rule.nodes[i] / p;
            double polyv = 1.0;
            double zk = 1.0;
            for (double d : f.poly) {
                zk *= z;
                polyv += d * zk;
            }
            acc += rule.weights[i] * polyv * laguerre(n, 2.0 * z);
        }
        acc /= p;
    }
    return sign * acc;
}

}  // namespace detail

/// Production bound: O_n = (-1)^n int F(z) e^{-z} L_n(2z) dz, evaluated
/// through the exact antiderivative of each monomial term.
inline double bound_via_1d_reduction(const TestFunction& f, int n) {
    if (n < 0) throw std::invalid_argument("bound_via_1d_reduction: n < 0");
    double sign = (n % 2) ? -1.0 : 1.0;
    if (f.power_form) {
        // with p = 1 every term is positive: O_n = scale * sum_i
        // binom(m,i) fall(n,i) rise(n+1, m-i)
        int m = f.power_degree;
        double sum = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= std::min(m, n); ++i) {
            if (i > 0) binom *= static_cast<double>(m - i + 1) / i;
            double fall = 1.0;
            for (int t = 0; t < i; ++t) fall *= n - t;
            double rise = 1.0;
            for (int t = 1; t <= m - i; ++t) rise *= n + t;
            sum += binom * fall * rise;
        }
        return f.scale * sum;
    }
    double acc = detail::reduction_monomial_integral(f.C, 0, n);
    for (size_t m = 0; m < f.poly.size(); ++m)
        acc += f.poly[m] *
               detail::reduction_monomial_integral(f.C, static_cast<int>(m) + 1, n);
    return sign * acc;
}

/// Closed form for F(z) = e^{-Cz}(1 + D z):
///   O_n = (1-C)^n/(1+C)^{n+1} + D (1-C)^{n-1}(1-C+2n)/(1+C)^{n+2},
/// with the n = 0 polynomial term equal to 1/(1+C)^2 (the removable
/// C = 1 case is handled by evaluating the two monomial integrals
/// separately, never by the (1-C)^{n-1} prefactor).
inline double bound_closed_form(double C, double D, int n) {
    if (n < 0) throw std::invalid_argument("bound_closed_form: n < 0");
    if (C < 0.0) throw std::invalid_argument("bound_closed_form: C must be >= 0");
    double first = std::pow(1.0 - C, n) / std::pow(1.0 + C, n + 1);
    double second;
    if (n == 0)
        second = 1.0 / std::pow(1.0 + C, 2);
    else
        second = std::pow(1.0 - C, n - 1) * (1.0 - C + 2.0 * n) /
                 std::pow(1.0 + C, n + 2);
    return first + D * second;
}

/// Slow 2D oracle for O_n straight from the defining double integral
/// (oscillatory Bessel kernel; used only to cross-validate the
/// reduction).  Requires an integrable F, i.e. C > 0 for the
/// exponential family.
inline double bound_via_2d_quadrature(const TestFunction& f, int n,
                                      double abs_tol = 1e-9) {
    if (f.power_form || f.C <= 0.0)
        throw std::invalid_argument(
            "bound_via_2d_quadrature: needs the exponential family with C > 0");
    // Outer range: walk out until F(2x^2) * x is negligible.
    double x_max = 1.0;
    while (std::abs(f(2.0 * x_max * x_max)) * x_max > 1e-16 && x_max < 64.0)
        x_max *= 1.25;
    double y_max = std::sqrt(4.0 * n + 80.0);

    auto inner = [&](double x) {
        auto gy = [&](double y) {
            return std::exp(-0.5 * y * y) * laguerre(n, y * y) *
                   bessel_j0(2.0 * x * y) * y;
        };
        return integrate_adaptive(gy, 0.0, y_max, abs_tol * 2e-2);
    };
    auto gx = [&](double x) { return f(2.0 * x * x) * x * inner(x); };
    return 4.0 * integrate_adaptive(gx, 0.0, x_max, abs_tol * 0.25);
}

struct SeparabilityBounds {
    std::vector<double> values;  // O_0 .. O_{n_max}
    double f_min = 0.0;
    double f_max = 0.0;
    int n_at_min = 0;
    int n_at_max = 0;
    bool converged = false;
    double tail_bound = 0.0;  // certified sup |O_n| beyond n_max (when converged)
};

namespace detail {

/// Exact envelope of |O_n| for the exponential-linear family (M <= 1),
/// monotone beyond small n when |1-C| < 1+C.
inline double exp_family_envelope(double C, double D, int n) {
    double r = std::abs(1.0 - C) / (1.0 + C);
    double head = (n == 0) ? 1.0 / (1.0 + C)
                           : std::pow(r, n) / (1.0 + C);
    double tailp;
    if (n == 0)
        tailp = std::abs(D) / std::pow(1.0 + C, 2);
    else
        tailp = std::abs(D) * std::pow(r, n - 1) * (std::abs(1.0 - C) + 2.0 * n) /
                std::pow(1.0 + C, 3);
    return head + tailp;
}

}  // namespace detail

namespace detail {

inline SeparabilityBounds bounds_scan(const TestFunction& fg, int n_max) {
    SeparabilityBounds out;
    out.values.resize(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out.values[n] = bound_via_1d_reduction(fg, n);
    out.f_max = out.values[0];
    out.f_min = out.values[0];
    for (int n = 0; n <= n_max; ++n) {
        if (out.values[n] > out.f_max) {
            out.f_max = out.values[n];
            out.n_at_max = n;
        }
        if (out.values[n] < out.f_min) {
            out.f_min = out.values[n];
            out.n_at_min = n;
        }
    }
    return out;
}

}  // namespace detail

/// Bound table O_0..O_{n_max} with extrema.  `converged` certifies that
/// no omitted n can move the extrema: for the exponential family with
/// M <= 1 the closed-form envelope bounds the tail, the scan extends
/// itself while the envelope still tops the computed extrema, and any
/// leftover tail widens the reported extrema (conservative, so verdicts
/// stay sound).  For other polynomial orders a geometric-ratio estimate
/// of the computed values is used.  Pure powers grow with n, so their
/// maximum diverges and only the minimum is certified.
inline SeparabilityBounds separability_bounds(const TestFunction& f, int n_max = 64,
                                              double gain = 1.0) {
    if (n_max < 0) throw std::invalid_argument("separability_bounds: n_max < 0");
    TestFunction fg = (gain == 1.0) ? f : f.gain_rescaled(gain);

    if (fg.power_form) {
        SeparabilityBounds out = detail::bounds_scan(fg, n_max);
        // O_n is a growing polynomial of degree `power` in n; certify the
        // minimum when the last stretch is strictly increasing and clear of
        // the current minimum.  The maximum side diverges with n.
        bool increasing = true;
        for (int n = std::max(1, n_max - 10); n <= n_max; ++n)
            increasing = increasing && (out.values[n] > out.values[n - 1]);
        out.converged = increasing && out.values[n_max] > out.f_min + 1e-10;
        out.tail_bound = out.values[n_max];
        out.f_max = std::numeric_limits<double>::infinity();
        out.n_at_max = -1;
        return out;
    }

    if (fg.poly.size() <= 1) {
        double D = fg.poly.empty() ? 0.0 : fg.poly[0];
        int cur = n_max;
        for (;;) {
            SeparabilityBounds out = detail::bounds_scan(fg, cur);
            double env = detail::exp_family_envelope(fg.C, D, cur + 1);
            double env_next = detail::exp_family_envelope(fg.C, D, cur + 2);
            double mag = std::max({std::abs(out.f_max), std::abs(out.f_min), 1e-30});
            bool env_decreasing = env_next <= env;
            bool tail_dominated = env <= out.f_max - 1e-10 && -env >= out.f_min + 1e-10;
            if (env_decreasing && (tail_dominated || env <= 1e-12 * mag || cur >= 1024)) {
                out.converged = true;
                out.tail_bound = env;
                // Fold whatever the tail could still reach into the extrema.
                if (env > out.f_max) {
                    out.f_max = env;
                    out.n_at_max = -1;
                }
                if (-env < out.f_min) {
                    out.f_min = -env;
                    out.n_at_min = -1;
                }
                return out;
            }
            if (cur >= 1024) {
                out.tail_bound = env;
                return out;  // provisional
            }
            cur = std::min(1024, 2 * cur);
        }
    }

    // Higher-order polynomial family: geometric ratio estimate on the
    // computed tail; provisional unless clearly contractive.
    SeparabilityBounds out = detail::bounds_scan(fg, n_max);
    double rhat = 0.0;
    for (int n = std::max(1, n_max - 10); n <= n_max; ++n) {
        double prev = std::abs(out.values[n - 1]);
        if (prev > 1e-300) rhat = std::max(rhat, std::abs(out.values[n]) / prev);
    }
    if (rhat < 0.9) {
        out.tail_bound = std::abs(out.values[n_max]) * rhat / (1.0 - rhat);
        out.converged = true;
        if (out.tail_bound > out.f_max) {
            out.f_max = out.tail_bound;
            out.n_at_max = -1;
        }
        if (-out.tail_bound < out.f_min) {
            out.f_min = -out.tail_bound;
            out.n_at_min = -1;
        }
    }
    return out;
}

/// Separable bound on E_1' = <u'^2> + <v'^2> at gain g.
inline double duan_bound(double g) {
    if (g == 0.0) throw std::invalid_argument("duan_bound: g must be nonzero");
    return 0.5 * (g * g + 1.0 / (g * g));
}

}  // namespace eprw
