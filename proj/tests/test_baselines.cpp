#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eprw/baselines.hpp"
#include "eprw/noise.hpp"
#include "eprw/state_catalog.hpp"

using namespace eprw;

TEST_CASE("simon test: vacuum sits on the boundary") {
    auto rep = simon_test(vacuum_two_mode());
    CHECK(rep.nu_minus == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(!rep.entangled);
}

TEST_CASE("simon test: tmss gives nu_minus = e^{-2s}/4") {
    for (double s : {0.25, 0.5, 1.0}) {
        auto rep = simon_test(make_tmss({s, TmssSpec::Operation::None}));
        CHECK(rep.nu_minus == doctest::Approx(std::exp(-2.0 * s) / 4.0).epsilon(1e-7));
        CHECK(rep.entangled);
    }
}

TEST_CASE("simon test: photon-added tmss detection threshold") {
    // fails below s ~ 0.378, detects above
    auto low = simon_test(make_tmss({0.3, TmssSpec::Operation::AddBoth}));
    CHECK(!low.entangled);
    auto high = simon_test(make_tmss({0.45, TmssSpec::Operation::AddBoth}));
    CHECK(high.entangled);
}

TEST_CASE("duan test anchors") {
    auto vac = duan_test(vacuum_two_mode());
    CHECK(vac.e1_prime == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(!vac.entangled);

    auto tm = duan_test(make_tmss({0.5, TmssSpec::Operation::None}));
    CHECK(tm.e1_prime == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
    CHECK(tm.entangled);

    // dephased cats are invisible to the variance tests
    auto cat = make_dephased_cat({0.5, 0.3});
    for (double g : {1.0, 0.8, 1.3})
        for (double phi : {0.0, 0.5, 1.2}) {
            auto rep = duan_test(cat, g, phi, -phi);
            CHECK(!rep.entangled);
        }
    CHECK(!simon_test(cat).entangled);

    CHECK_THROWS_AS(duan_test(vacuum_two_mode(), 0.0), std::invalid_argument);
}

TEST_CASE("duan gain freedom changes the bound consistently") {
    auto tm = make_tmss({0.5, TmssSpec::Operation::None});
    for (double g : {1.0, std::sqrt(2.0), 2.0}) {
        auto rep = duan_test(tm, g);
        CHECK(rep.bound == doctest::Approx(duan_bound(g)));
    }
}

TEST_CASE("duan-detected states are simon-detected on a catalog grid") {
    std::vector<TwoModeState> states;
    for (double s : {0.2, 0.6})
        states.push_back(make_tmss({s, TmssSpec::Operation::None}));
    states.push_back(make_tmss({0.5, TmssSpec::Operation::SubtractBoth}));
    for (double p : {0.3, 0.8}) states.push_back(make_dephased_cat({0.6, p}));
    NoiseSpec noisy{0.8, 0.05, NoiseSpec::Stage::Channel};
    states.push_back(apply_loss_thermal(make_tmss({0.5, TmssSpec::Operation::None}), noisy));

    for (const auto& st : states) {
        bool duan_any = false;
        for (double g : {0.8, 1.0, 1.25})
            duan_any = duan_any || duan_test(st, g).entangled;
        if (duan_any) CHECK(simon_test(st).entangled);
    }
}
