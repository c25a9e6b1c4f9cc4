#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eprw/covariance.hpp"
#include "eprw/noise.hpp"
#include "eprw/phase_space.hpp"
#include "eprw/state_catalog.hpp"

using namespace eprw;

TEST_CASE("dephased cat basics") {
    // nu = 0: all four terms coincide with vacuum
    auto flat = make_dephased_cat({0.0, 0.7});
    CHECK(std::abs(flat.rho(0, 0).real() - 1.0) <= 1e-12);

    // p = 1: pure odd-parity cat pair
    auto pure_cat = make_dephased_cat({0.5, 1.0});
    CHECK(pure_cat.purity() == doctest::Approx(1.0).epsilon(1e-8));

    // p < 1 with nu > 0: mixed
    auto mixed = make_dephased_cat({0.5, 0.3});
    CHECK(mixed.purity() < 1.0 - 1e-3);
    CHECK(std::abs(mixed.trace() - 1.0) <= 1e-10);
    CHECK(mixed.min_eigenvalue() >= -1e-10);

    // unnormalized trace 2 - 2 p e^{-4 nu^2}, reconstructed from the
    // coherent overlap <nu|-nu> = e^{-2 nu^2} per mode
    double nu = 0.5, p = 0.3;
    int d = 16;
    VectorXcd cp = coherent_state_vector(d, nu), cm = coherent_state_vector(d, -nu);
    complexd ov = (cp.adjoint() * cm)(0, 0);
    CHECK(std::abs(ov - std::exp(-2.0 * nu * nu)) <= 1e-12);
    double unnorm = 2.0 - 2.0 * p * std::norm(ov);
    CHECK(unnorm == doctest::Approx(2.0 - 0.6 * std::exp(-1.0)).epsilon(1e-10));

    CHECK_THROWS_AS(make_dephased_cat({0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_dephased_cat({-0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("tmss families") {
    auto vac = make_tmss({0.0, TmssSpec::Operation::None});
    CHECK(vac.rho(0, 0).real() == doctest::Approx(1.0));

    double s = 0.5;
    auto tmss = make_tmss({s, TmssSpec::Operation::None});
    CHECK(tmss.mean_photons(0) ==
          doctest::Approx(std::sinh(s) * std::sinh(s)).epsilon(1e-9));
    CHECK(tmss.converged);

    // subtraction: amplitudes on |nn> proportional to (n+1) t^{n+1}
    auto sub = make_tmss({s, TmssSpec::Operation::SubtractBoth});
    double t = std::tanh(s);
    double a0 = std::sqrt(sub.rho(sub.index(0, 0), sub.index(0, 0)).real());
    double a1 = std::sqrt(sub.rho(sub.index(1, 1), sub.index(1, 1)).real());
    CHECK(a1 / a0 == doctest::Approx(2.0 * t).epsilon(1e-9));
    CHECK(sub.purity() == doctest::Approx(1.0).epsilon(1e-8));

    // addition: no vacuum component, starts at |11>
    auto add = make_tmss({s, TmssSpec::Operation::AddBoth});
    CHECK(std::abs(add.rho(0, 0)) <= 1e-14);
    CHECK(add.rho(add.index(1, 1), add.index(1, 1)).real() > 0.1);

    // photon subtraction raises the mean energy above the parent TMSS
    CHECK(sub.mean_photons(0) > tmss.mean_photons(0));

    // energy matching recovers s for a plain TMSS
    CHECK(energy_matched_tmss_s(tmss) == doctest::Approx(s).epsilon(1e-8));

    CHECK_THROWS_AS(make_tmss({0.0, TmssSpec::Operation::SubtractBoth}),
                    std::invalid_argument);
}

TEST_CASE("loss channel limits") {
    auto cat = make_dephased_cat({0.5, 0.3});

    NoiseSpec ident{1.0, 0.0, NoiseSpec::Stage::Channel};
    auto same = apply_loss_thermal(cat, ident);
    CHECK((same.rho - cat.rho).cwiseAbs().maxCoeff() <= 1e-14);

    NoiseSpec dark{1e-9, 0.0, NoiseSpec::Stage::Channel};
    auto dead = apply_loss_thermal(cat, dark, true, false);
    MatrixXcd ra = partial_trace_mode(dead, 0);
    CHECK(ra(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("coherent state attenuates to sqrt(eta) amplitude") {
    complexd a{0.7, -0.4};
    auto coh = coherent_product(a, 0.3);
    NoiseSpec spec{0.6, 0.0, NoiseSpec::Stage::Channel};
    auto out = apply_loss_thermal(coh, spec, true, false);
    CHECK(std::abs(out.trace() - 1.0) <= 1e-9);
    auto cd = covariance_matrix(out);
    CHECK(cd.mean[0] == doctest::Approx(std::sqrt(0.6) * a.real()).epsilon(1e-8));
    CHECK(cd.mean[1] == doctest::Approx(std::sqrt(0.6) * a.imag()).epsilon(1e-8));
    // mode B untouched
    CHECK(cd.mean[2] == doctest::Approx(0.3).epsilon(1e-8));
    // still a coherent state: covariance stays at the vacuum value
    CHECK((cd.cov - 0.25 * Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("channel composition and covariance-level agreement") {
    auto tmss = make_tmss({0.4, TmssSpec::Operation::None});

    NoiseSpec n1{0.8, 0.0, NoiseSpec::Stage::Channel};
    NoiseSpec n2{0.7, 0.0, NoiseSpec::Stage::Channel};
    NoiseSpec n12{0.56, 0.0, NoiseSpec::Stage::Channel};
    auto seq = apply_loss_thermal(apply_loss_thermal(tmss, n1), n2);
    auto direct = apply_loss_thermal(tmss, n12);
    CHECK((seq.rho - direct.rho).cwiseAbs().maxCoeff() <= 1e-7);

    NoiseSpec th{0.65, 0.25, NoiseSpec::Stage::Channel};
    auto noisy = apply_loss_thermal(tmss, th);
    CHECK(std::abs(noisy.trace() - 1.0) <= 1e-6);
    CHECK(noisy.min_eigenvalue() >= -1e-9);
    auto got = covariance_matrix(noisy);
    auto want = gaussian_loss_thermal_map(covariance_matrix(tmss), th.eta, th.n_th);
    CHECK((got.cov - want.cov).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("decoherence trajectory endpoints") {
    auto tmss = make_tmss({0.5, TmssSpec::Operation::None});
    auto traj = decoherence_trajectory(tmss, 0.0, {0.0, 0.2, 1.0});
    REQUIRE(traj.size() == 3);
    CHECK((traj[0].rho - tmss.rho).cwiseAbs().maxCoeff() <= 1e-14);

    // coherent amplitude decays as e^{-t/2}
    auto coh = coherent_product(0.8, 0.0);
    auto ctraj = decoherence_trajectory(coh, 0.0, {0.7});
    auto cd = covariance_matrix(ctraj[0]);
    CHECK(cd.mean[0] == doctest::Approx(0.8 * std::exp(-0.35)).epsilon(1e-7));

    // TMSS EPR variance follows the analytic Gaussian channel
    double nth = 0.1, tt = 0.5, eta = std::exp(-tt);
    auto ntraj = decoherence_trajectory(tmss, nth, {tt});
    auto got = covariance_matrix(ntraj[0]);
    auto want = gaussian_loss_thermal_map(covariance_matrix(tmss), eta, nth);
    CHECK((got.cov - want.cov).cwiseAbs().maxCoeff() <= 1e-6);

    CHECK_THROWS_AS(decoherence_trajectory(tmss, 0.0, {0.5, 0.2}),
                    std::invalid_argument);
}
