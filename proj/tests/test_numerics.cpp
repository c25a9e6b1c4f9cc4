#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eprw/quadrature.hpp"
#include "eprw/rng.hpp"
#include "eprw/special_functions.hpp"

using namespace eprw;

TEST_CASE("laguerre polynomial values") {
    CHECK(laguerre(0, 3.7) == doctest::Approx(1.0));
    CHECK(laguerre(1, 1.0) == doctest::Approx(0.0));
    CHECK(laguerre(2, 2.0) == doctest::Approx(-1.0));  // (4 - 8 + 2)/2
    CHECK(laguerre(3, 1.5) == doctest::Approx(-0.6875));
    auto all = laguerre_all(6, 0.0);
    for (double v : all) CHECK(v == doctest::Approx(1.0));  // L_n(0) = 1
}

TEST_CASE("associated laguerre against explicit low orders") {
    // L_1^(a)(x) = 1 + a - x
    CHECK(assoc_laguerre(1, 2, 0.7) == doctest::Approx(2.3));
    // L_2^(1)(x) = 3 - 3x + x^2/2
    CHECK(assoc_laguerre(2, 1, 2.0) == doctest::Approx(3.0 - 6.0 + 2.0));
}

TEST_CASE("hermite psi functions: orthonormality under our scale") {
    // Trapezoid integral of psi_m psi_n over a wide range.
    const int nmax = 8;
    const double L = 6.0, h = 1e-3;
    std::vector<std::vector<double>> gram(nmax + 1, std::vector<double>(nmax + 1, 0.0));
    for (double x = -L; x <= L; x += h) {
        auto psi = hermite_psi_all(nmax, x);
        for (int m = 0; m <= nmax; ++m)
            for (int n = 0; n <= nmax; ++n) gram[m][n] += h * psi[m] * psi[n];
    }
    for (int m = 0; m <= nmax; ++m)
        for (int n = 0; n <= nmax; ++n)
            CHECK(gram[m][n] == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-6));
}

TEST_CASE("vacuum wavefunction variance is 1/4") {
    double s = 0.0, h = 1e-3;
    for (double x = -6.0; x <= 6.0; x += h) {
        auto psi = hermite_psi_all(0, x);
        s += h * x * x * psi[0] * psi[0];
    }
    CHECK(s == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto& r = gauss_legendre(16);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * std::pow(r.nodes[i], 10);
    CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("gauss-laguerre moments") {
    const auto& r = gauss_laguerre(32);
    // int_0^inf x^7 e^-x = 7! = 5040
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * std::pow(r.nodes[i], 7);
    CHECK(s == doctest::Approx(5040.0).epsilon(1e-12));

    // normalized generalized rule = Gamma(alpha+1, 1) probability weights
    const auto& g = gauss_laguerre(64, 49.0, true);
    double w = 0.0, mean = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        w += g.weights[i];
        mean += g.weights[i] * g.nodes[i];
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(50.0).epsilon(1e-10));  // Gamma(50) mean
}

TEST_CASE("adaptive integrator on a peaked function") {
    auto f = [](double x) { return std::exp(-50.0 * (x - 0.3) * (x - 0.3)); };
    double v = integrate_adaptive(f, -2.0, 2.0, 1e-12);
    CHECK(v == doctest::Approx(std::sqrt(kPi / 50.0)).epsilon(1e-10));
}

TEST_CASE("simpson weights integrate cubics exactly") {
    int n = 11;
    double h = 0.1;
    auto w = simpson_weights(n, h);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = i * h;
        s += w[i] * x * x * x;
    }
    CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("seeded rng reproducibility and shard independence") {
    SeededRng a(42), b(42), c(43);
    bool same = true, diff = false;
    for (int i = 0; i < 100; ++i) {
        double x = a.uniform01(), y = b.uniform01(), z = c.uniform01();
        same = same && (x == y);
        diff = diff || (x != z);
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(same);
    CHECK(diff);
    CHECK(shard_seed(7, 0) != shard_seed(7, 1));
}

TEST_CASE("bessel j0 sanity") {
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0));
    CHECK(bessel_j0(2.404825557695773) == doctest::Approx(0.0).epsilon(1e-12));
}
