// pm_channel.hpp
// The heavy-tailed quadrature family
//   p_m(X) = [2 (2m)! / (m!)^2] |X| exp(-(2 (2m)!/m!)^{1/m} |X|^{2/m})
// and the teleportation channel built from it (identical fields mixed on
// a 50:50 splitter, one with a pi/2 phase shift).  Every observable
// reduces to 1D integrals over p_m; the two-mode state itself is never
// represented in Fock space (quadrature-eigenstate mixtures do not
// truncate).
//
// For all m: the distribution is normalized and <X^2> = 1/4, so the
// channel has E_1 = 1 (no EPR correlation) while its fidelity
// f_1(m)^2 -> 1 as m grows.
//
// Numerics: with w = B |X|^{2/m} the mass is Gamma(m)-distributed, so
// smooth integrands are integrated in w-space (log-density, no
// factorial overflow).  The oscillatory characteristic integrand is
// split: bulk in w-space while |X| <= 1, tail in X-space where the
// oscillation is slow on the |X| scale, with an integration-by-parts
// bound on the dropped remainder.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eprw/quadrature.hpp"
#include "eprw/special_functions.hpp"

namespace eprw {

struct PmChannelSpec {
    int m = 1;
};

namespace detail {

struct PmParams {
    int m;
    double log_a;  // ln of the prefactor 2 (2m)!/(m!)^2
    double log_b;  // ln of the stretched-exponential rate
    double b;
};

inline PmParams pm_params(int m) {
    if (m < 1) throw std::invalid_argument("pm_channel: m must be >= 1");
    PmParams p;
    p.m = m;
    p.log_a = std::log(2.0) + std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0);
    p.log_b = (std::log(2.0) + std::lgamma(2.0 * m + 1.0) - std::lgamma(m + 1.0)) / m;
    p.b = std::exp(p.log_b);
    return p;
}

inline double pm_x_of_w(const PmParams& p, double w) {
    if (w <= 0.0) return 0.0;
    return std::exp(0.5 * p.m * (std::log(w) - p.log_b));
}

/// E_{w ~ Gamma(m)} [ G(X(w)) ] over an explicit w-window.
template <class G>
double pm_gamma_expect(const PmParams& p, const G& g, double w_lo, double w_hi,
                       double tol = 1e-11) {
    double lg = std::lgamma(static_cast<double>(p.m));
    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        double logd = (p.m - 1.0) * std::log(w) - w - lg;
        return std::exp(logd) * g(pm_x_of_w(p, w));
    };
    return integrate_adaptive(integrand, w_lo, w_hi, tol);
}

inline std::pair<double, double> pm_bulk_window(const PmParams& p) {
    double sd = std::sqrt(static_cast<double>(p.m));
    double lo = std::max(0.0, p.m - 14.0 * sd);
    double hi = p.m + 16.0 * sd + 30.0;
    return {lo, hi};
}

}  // namespace detail

/// p_m(X) itself; log-gamma arithmetic keeps m up to hundreds finite.
inline double pm_density(const PmChannelSpec& spec, double X) {
    auto p = detail::pm_params(spec.m);
    double ax = std::abs(X);
    if (ax == 0.0) return 0.0;
    double arg = p.log_a + std::log(ax) -
                 std::exp(p.log_b + (2.0 / p.m) * std::log(ax));
    return std::exp(arg);
}

/// int p_m dX (must be 1; exposed for verification).
inline double pm_normalization(const PmChannelSpec& spec) {
    auto p = detail::pm_params(spec.m);
    auto [lo, hi] = detail::pm_bulk_window(p);
    return detail::pm_gamma_expect(p, [](double) { return 1.0; }, lo, hi);
}

/// <X^2> (must be 1/4 for every m).  The integrand peaks near w = 2m, so
/// the window extends past the plain bulk.
inline double pm_second_moment(const PmChannelSpec& spec) {
    auto p = detail::pm_params(spec.m);
    double sd = std::sqrt(2.0 * p.m);
    double lo = std::max(0.0, p.m - 14.0 * std::sqrt(static_cast<double>(p.m)));
    double hi = 2.0 * p.m + 18.0 * sd + 40.0;
    return detail::pm_gamma_expect(
        p, [](double x) { return x * x; }, lo, hi, 1e-12);
}

/// f_1 = <e^{-2 X^2}>; approaches 1 from below as m grows.
inline double f1(const PmChannelSpec& spec) {
    auto p = detail::pm_params(spec.m);
    auto [lo, hi] = detail::pm_bulk_window(p);
    return detail::pm_gamma_expect(
        p, [](double x) { return std::exp(-2.0 * x * x); }, lo, hi);
}

/// C_p(k) = int p_m(X) e^{-2 sqrt(2) i k X} dX (real and even in k).
inline double pm_channel_characteristic(const PmChannelSpec& spec, double k) {
    auto p = detail::pm_params(spec.m);
    double c = 2.0 * std::sqrt(2.0) * std::abs(k);
    auto [w_lo, w_hi] = detail::pm_bulk_window(p);

    // bulk: |X| <= 1, i.e. w <= B; bounded phase, integrate in w
    double w_split = std::min(p.b, w_hi);
    double bulk = detail::pm_gamma_expect(
        p, [&](double x) { return std::cos(c * x); }, w_lo, w_split, 1e-11);

    // tail: X >= 1 in X-space where the oscillation spacing is O(1/c).
    double tail = 0.0;
    if (w_split < w_hi) {
        auto integrand = [&](double x) {
            double arg = p.log_a + std::log(x) -
                         std::exp(p.log_b + (2.0 / p.m) * std::log(x));
            return 2.0 * std::exp(arg) * std::cos(c * x);  // both signs of X
        };
        // truncate where the integration-by-parts remainder 2 p(Xc)/c is dust
        double x_hi = 1.0;
        double floor_scale = std::max(c, 1e-3);
        while (pm_density(spec, x_hi) > 1e-11 * floor_scale && x_hi < 1e7)
            x_hi *= 1.3;
        tail = integrate_adaptive(integrand, 1.0, x_hi, 1e-10);
    }
    return bulk + tail;
}

namespace detail {

/// (1/pi) int e^{-|l|^2} L_n(|l|^2)^2 cp(l_x) cp(l_y) d^2 l for an even
/// factorized channel characteristic.
template <class Cp>
double fock_fidelity_with_cp(const Cp& cp, int n, double R) {
    const int pts = 513;
    const double h = R / (pts - 1);
    auto w = simpson_weights(pts, h);
    double acc = 0.0;
    for (int i = 0; i < pts; ++i) {
        double lx = i * h, cx = cp(lx);
        double row = 0.0;
        for (int j = 0; j < pts; ++j) {
            double ly = j * h;
            double r2 = lx * lx + ly * ly;
            double ln = laguerre(n, r2);
            row += w[j] * std::exp(-r2) * ln * ln * cp(ly);
        }
        acc += w[i] * cx * row;
    }
    return 4.0 * acc / kPi;  // even in both axes
}

}  // namespace detail

/// BK fidelity of the p_m channel for a Fock-state input |n>:
/// F = (1/pi) int e^{-|l|^2} L_n(|l|^2)^2 C_p(l_x) C_p(l_y) d^2 l.
inline double fock_input_fidelity(const PmChannelSpec& spec, int n) {
    if (n < 0) throw std::invalid_argument("fock_input_fidelity: n < 0");
    const double R = std::sqrt(4.0 * n + 40.0);
    const int table_n = 2049;
    const double dk = R / (table_n - 1);
    std::vector<double> cp(table_n);
    for (int i = 0; i < table_n; ++i)
        cp[i] = pm_channel_characteristic(spec, i * dk);
    auto cp_interp = [&](double k) {
        double t = std::abs(k) / dk;
        int i = std::min(table_n - 2, static_cast<int>(t));
        double f = t - i;
        return (1.0 - f) * cp[i] + f * cp[i + 1];
    };
    return detail::fock_fidelity_with_cp(cp_interp, n, R);
}

/// E_1 of the p_m channel: 2<X^2> + 2<P^2> = 4<X^2>.
inline double pm_channel_e1(const PmChannelSpec& spec) {
    return 4.0 * pm_second_moment(spec);
}

/// Vacuum-input fidelity f_1 f_2 = f_1^2 (the two marginals coincide).
inline double pm_vacuum_fidelity(const PmChannelSpec& spec) {
    double f = f1(spec);
    return f * f;
}

}  // namespace eprw
