// Acceptance suite: one pass/fail line per criterion, exit code equals
// the number of failed criteria.  Each criterion pins its tolerances in
// code; sub-checks print their own diagnostics when they fail.

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "eprw/eprw.hpp"

using namespace eprw;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
    void check_close(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            pass = false;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s: got %.12g want %.12g (tol %g)",
                          what.c_str(), got, want, tol);
            notes.push_back(buf);
        }
    }
};

int g_failures = 0;
int g_only = 0;  // 0 = run all; otherwise the single criterion to run

template <class Fn>
void run_criterion(int id, const std::string& name, Fn&& body) {
    if (g_only != 0 && id != g_only) return;
    Criterion c{id, name, true, {}};
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d: %s  [%.1fs]\n", c.pass ? "PASS" : "FAIL", id,
                name.c_str(), secs);
    for (const auto& n : c.notes) std::printf("       - %s\n", n.c_str());
    std::fflush(stdout);
    if (!c.pass) ++g_failures;
}

EprMeasurementConfig grid_cfg(int points = 1025) {
    EprMeasurementConfig cfg;
    cfg.grid_points = points;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_only = std::atoi(argv[1]);  // run a single criterion

    // 1. The three bound routes agree on random test functions.
    run_criterion(1, "bound oracle equivalence (2D = 1D = closed form)", [](Criterion& c) {
        SeededRng rng(20240801);
        for (int t = 0; t < 20; ++t) {
            double C = 0.2 + 9.8 * rng.uniform01();
            double D = -80.0 + 160.0 * rng.uniform01();
            int n = static_cast<int>(rng.uniform01() * 7);
            auto f = TestFunction::exponential(C, {D});
            double v2d = bound_via_2d_quadrature(f, n);
            double v1d = bound_via_1d_reduction(f, n);
            double vcf = bound_closed_form(C, D, n);
            std::ostringstream tag;
            tag << "(C=" << C << ", D=" << D << ", n=" << n << ")";
            c.check(std::abs(v2d - v1d) <= 1e-6, "2D vs 1D " + tag.str());
            c.check(std::abs(v1d - vcf) <= 1e-6, "1D vs closed " + tag.str());
            c.check(std::abs(v2d - vcf) <= 1e-6, "2D vs closed " + tag.str());
        }
    });

    // 2. D = 0 anchors.
    run_criterion(2, "exponential-family anchors F_max = 1/(1+C)", [](Criterion& c) {
        for (double C : {0.5, 1.0, 2.0, 10.0}) {
            auto b = separability_bounds(TestFunction::exponential(C));
            c.check(b.converged, "bounds converged");
            c.check(b.n_at_max == 0, "maximum at n = 0");
            c.check_close(b.f_max, 1.0 / (1.0 + C), 1e-9, "f_max");
        }
        c.check_close(separability_bounds(TestFunction::exponential(1.0)).f_max, 0.5,
                      1e-9, "C = 1 classical limit");
    });

    // 3. Moment bounds and the Duan bound.
    run_criterion(3, "moment bounds E_m >= m! and Duan gain bound", [](Criterion& c) {
        double fact = 1.0;
        for (int m = 1; m <= 5; ++m) {
            fact *= m;
            auto b = separability_bounds(TestFunction::power(m));
            c.check(b.converged && b.n_at_min == 0, "power minimum at n = 0");
            c.check_close(b.f_min, fact, 1e-7 * fact, "min O_n for z^m");
        }
        c.check_close(duan_bound(1.0), 1.0, 1e-12, "g = 1");
        c.check_close(duan_bound(std::sqrt(2.0)), 1.25, 1e-12, "g = sqrt(2)");
        c.check_close(duan_bound(2.0), 2.125, 1e-12, "g = 2");
    });

    // 4. Vacuum boundary saturation through the full pipeline.
    run_criterion(4, "vacuum boundary saturation (Fock + quadrature pipeline)",
                  [](Criterion& c) {
        auto vac = vacuum_two_mode();
        for (double C : {0.5, 1.0, 2.0}) {
            auto est = exact_expectation(vac, TestFunction::exponential(C), grid_cfg());
            c.check_close(est.mean, 1.0 / (1.0 + C), 1e-6, "<exp(-C O)>");
        }
        auto ms = epr_moments(vac, 4, grid_cfg());
        double fact = 1.0;
        for (int m = 1; m <= 4; ++m) {
            fact *= m;
            c.check_close(ms[m - 1], fact, 1e-6 * fact, "E_m");
        }
    });

    // 5. Separable states never violate.
    run_criterion(5, "separable soundness (50 states x 50 witnesses)", [](Criterion& c) {
        SeededRng rng(555);
        std::vector<TwoModeState> states;
        for (int i = 0; i < 50; ++i) {
            if (i % 2 == 0) {
                complexd a(0.1 + 1.1 * rng.uniform01(), -0.6 + 1.2 * rng.uniform01());
                complexd b(0.1 + 1.1 * rng.uniform01(), -0.6 + 1.2 * rng.uniform01());
                states.push_back(coherent_product(a, b));
            } else {
                double nbar = 0.05 + 0.25 * rng.uniform01();
                complexd a(0.1 + 1.1 * rng.uniform01(), -0.6 + 1.2 * rng.uniform01());
                // cutoffs sized to the occupations (tails ~1e-9)
                int d_th = 4 + static_cast<int>(std::ceil(
                               std::log(1e-9 * (1.0 + nbar)) /
                               std::log(nbar / (1.0 + nbar))));
                double na = std::norm(a);
                int d_coh = std::max(
                    10, static_cast<int>(std::ceil(na + 7.0 * std::sqrt(na + 1.0) + 8.0)));
                TwoModeState s = tensor_product(
                    thermal_state_matrix(d_th, nbar),
                    coherent_state_vector(d_coh, a) *
                        coherent_state_vector(d_coh, a).adjoint());
                s.refresh_converged();
                states.push_back(std::move(s));
            }
        }
        struct Params { double C, D, pa, pb; };
        std::vector<Params> params;
        for (int j = 0; j < 50; ++j)
            params.push_back({0.05 + 9.95 * rng.uniform01(),
                              -80.0 + 160.0 * rng.uniform01(),
                              kPi * rng.uniform01(), kPi * rng.uniform01()});
        double worst = -1e300;
        int violations = 0;
        for (const auto& st : states) {
            for (const auto& pr : params) {
                EprMeasurementConfig cfg = grid_cfg(257);
                cfg.phi_a = pr.pa;
                cfg.phi_b = pr.pb;
                auto profile = EprDistribution(st, cfg).radial_profile();
                auto f = TestFunction::exponential(pr.C, {pr.D});
                auto bounds = separability_bounds(f);
                if (!bounds.converged) continue;
                double mean = profile.expect(f);
                double viol = std::max(mean - bounds.f_max, bounds.f_min - mean);
                worst = std::max(worst, viol);
                if (viol > 1e-9) ++violations;
            }
        }
        std::ostringstream msg;
        msg << "violations above 1e-9: " << violations << " (worst margin " << worst << ")";
        c.check(violations == 0, msg.str());
    });

    // 6. Dephased-cat detection, exact and finite-sample.
    run_criterion(6, "dephased-cat detection (exact grid; empirical at eta=0.7)",
                  [](Criterion& c) {
        for (double nu : {0.25, 0.5, 1.0})
            for (double p : {0.1, 0.3, 0.5}) {
                auto st = make_dephased_cat({nu, p});
                OptimizationSpec spec;
                auto r = optimize_witness(st, spec);
                std::ostringstream tag;
                tag << "exact violation at (nu=" << nu << ", p=" << p << ")";
                c.check(r.detected && r.verdict_result.violation > 0.0, tag.str());
            }
        // finite-sample claim at p = 0.5 under detection noise
        int point = 0;
        for (double nu : {0.25, 0.5, 1.0}) {
            auto st = make_dephased_cat({nu, 0.5});
            NoiseSpec ns{0.7, 0.07, NoiseSpec::Stage::Detection};
            st = apply_loss_thermal(st, ns);
            OptimizationSpec spec;
            spec.objective = OptimizationSpec::Objective::Significance;
            EprMeasurementConfig mc;
            mc.n_samples = 100000;
            auto r = optimize_witness(st, spec, mc);
            mc.phi_a = r.phi_a;
            mc.phi_b = r.phi_b;
            mc.seed = shard_seed(99, point++);
            auto samples = sample_homodyne(st, mc);
            auto f = TestFunction::exponential(r.c, {r.d});
            auto est = empirical_witness(samples, f);
            auto bounds = separability_bounds(f);
            std::ostringstream tag;
            tag << "empirical excess at nu=" << nu << ": mean-F_max="
                << est.mean - bounds.f_max << " vs delta_e=" << est.delta_e;
            if (!(est.mean - bounds.f_max > est.delta_e)) {
                // diagnose: is the point detectable at all in exact arithmetic?
                OptimizationSpec vspec;
                auto rv = optimize_witness(st, vspec, mc);
                tag << "; exact optimum violation here = "
                    << rv.verdict_result.violation
                    << (rv.verdict_result.violation <= 0.0
                            ? " (undetectable at these noise parameters; no "
                              "sample size can pass)"
                            : "");
            }
            c.check(est.mean - bounds.f_max > est.delta_e, tag.str());
        }
    });

    // 7. Photon-added TMSS: Simon threshold and witness coverage.
    run_criterion(7, "photon-added TMSS: Simon s*=0.378, witness detects s>0",
                  [](Criterion& c) {
        double lo = 0.2, hi = 0.6;
        while (hi - lo > 1e-4) {
            double mid = 0.5 * (lo + hi);
            auto st = make_tmss({mid, TmssSpec::Operation::AddBoth});
            (simon_test(st).entangled ? hi : lo) = mid;
        }
        double s_star = 0.5 * (lo + hi);
        c.check_close(s_star, 0.378, 0.005, "Simon failure threshold");
        for (double s : {0.1, 0.2, 0.3}) {
            auto st = make_tmss({s, TmssSpec::Operation::AddBoth});
            c.check(!simon_test(st).entangled, "Simon blind below threshold");
            OptimizationSpec spec;
            auto r = optimize_witness(st, spec);
            std::ostringstream tag;
            tag << "witness detects added TMSS at s=" << s;
            c.check(r.detected, tag.str());
        }
    });

    // 8. c0|00> + c1|11>: detection and significance ordering.
    run_criterion(8, "superposition family: detection + significance ordering",
                  [](Criterion& c) {
        int point = 0;
        for (double c0 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double c1 = std::sqrt(1.0 - c0 * c0);
            auto st = make_fock_superposition({{0, 0, c0}, {1, 1, c1}});

            OptimizationSpec spec;
            auto rw = optimize_witness(st, spec);
            std::ostringstream tag;
            tag << "witness detects at c0=" << c0;
            c.check(rw.detected, tag.str());

            auto rs = simon_test(st);
            std::ostringstream tag2;
            tag2 << "Simon detects at c0=" << c0 << " (nu_minus=" << rs.nu_minus
                 << "; analytic boundary c0=1/sqrt(2), see ledger)";
            c.check(rs.entangled, tag2.str());

            // finite-sample ordering on one recorded data set
            NoiseSpec ns{0.7, 0.07, NoiseSpec::Stage::Detection};
            auto noisy = apply_loss_thermal(st, ns);
            EprMeasurementConfig mc;
            mc.n_samples = 100000;
            mc.seed = shard_seed(8, point++);
            auto samples = sample_homodyne(noisy, mc);
            OptimizationSpec espec;
            espec.mode = OptimizationSpec::Mode::Empirical;
            espec.objective = OptimizationSpec::Objective::Significance;
            espec.include_linear_term = false;
            auto r0 = optimize_witness(noisy, espec, mc, &samples);
            espec.include_linear_term = true;
            auto r1 = optimize_witness(noisy, espec, mc, &samples);
            std::ostringstream tag3;
            tag3 << "significance(M=1)=" << r1.objective_value
                 << " >= significance(M=0)=" << r0.objective_value << " at c0=" << c0;
            c.check(r1.objective_value >= r0.objective_value - 1e-9, tag3.str());
        }
    });

    // 9. Robustness ordering under a thermal reservoir.
    run_criterion(9, "decoherence robustness: subtracted TMSS outlives matched TMSS",
                  [](Criterion& c) {
        double nth = 0.05;
        auto sub = make_tmss({0.5, TmssSpec::Operation::SubtractBoth});
        auto matched = make_tmss({energy_matched_tmss_s(sub), TmssSpec::Operation::None});
        OptimizationSpec spec;
        double t_ours = detection_time(sub, nth, DetectionCriterion::FunctionalWitness, spec);
        double t_simon = detection_time(matched, nth, DetectionCriterion::Simon);
        std::ostringstream msg;
        msg << "t_witness(subtracted)=" << t_ours << " vs t_simon(matched)=" << t_simon
            << " at s=0.5; the ordering reverses near s~0.25-0.3 under this "
               "construction (see ledger)";
        c.check(t_ours > t_simon, msg.str());
        c.check(t_simon > 0.0, "matched TMSS detected at t = 0");
        // The phenomenon itself lives at smaller squeezing: verify it there.
        auto sub2 = make_tmss({0.2, TmssSpec::Operation::SubtractBoth});
        auto matched2 =
            make_tmss({energy_matched_tmss_s(sub2), TmssSpec::Operation::None});
        double t2_ours =
            detection_time(sub2, nth, DetectionCriterion::FunctionalWitness, spec);
        double t2_simon = detection_time(matched2, nth, DetectionCriterion::Simon);
        std::ostringstream msg2;
        msg2 << "ordering at s=0.2: t_witness(subtracted)=" << t2_ours
             << " vs t_simon(matched)=" << t2_simon;
        c.check(t2_ours > t2_simon, msg2.str());
    });

    // 10. Teleportation fidelity anchors.
    run_criterion(10, "teleportation anchors and moment series", [](Criterion& c) {
        auto vac = fidelity_via_epr(vacuum_two_mode(), grid_cfg());
        c.check_close(vac.fidelity, 0.5, 1e-8, "vacuum channel fidelity");
        for (double s : {0.25, 0.5, 1.0}) {
            auto rep = fidelity_via_epr(make_tmss({s, TmssSpec::Operation::None}), grid_cfg());
            std::ostringstream tag;
            tag << "TMSS fidelity at s=" << s;
            c.check_close(rep.fidelity, 1.0 / (1.0 + std::exp(-2.0 * s)), 1e-6, tag.str());
        }
        std::vector<TwoModeState> channels;
        channels.push_back(vacuum_two_mode());
        channels.push_back(make_tmss({0.5, TmssSpec::Operation::None}));
        channels.push_back(make_tmss({0.5, TmssSpec::Operation::SubtractBoth}));
        channels.push_back(make_tmss({0.3, TmssSpec::Operation::AddBoth}));
        channels.push_back(make_dephased_cat({0.5, 0.3}));
        channels.push_back(make_fock_superposition({{0, 0, 0.6}, {1, 1, 0.8}}));
        for (size_t i = 0; i < channels.size(); ++i) {
            auto rep = fidelity_via_epr(channels[i], grid_cfg());
            std::ostringstream tag;
            tag << "F >= 1 - E1 on catalog channel " << i;
            c.check(rep.fidelity >= rep.lower_bound - 1e-8, tag.str());
        }
        // series identity over one common bounded measure (high powers
        // amplify truncation dust outside the statistical support)
        EprDistribution dist(make_tmss({0.5, TmssSpec::Operation::None}), grid_cfg(513));
        auto rp = dist.radial_profile(8192, dist.six_sigma_o());
        double f_expect = rp.expect(TestFunction::exponential(1.0));
        double partial = 0.0, fact = 1.0;
        for (int m = 0; m <= 40; ++m) {
            if (m > 0) fact *= m;
            double em = (m == 0) ? rp.expect(TestFunction::power(0))
                                 : rp.expect(TestFunction::power(m));
            partial += ((m % 2) ? -1.0 : 1.0) * em / fact;
        }
        c.check_close(partial, f_expect, 1e-6, "moment series vs expectation form");
        c.check_close(f_expect, 1.0 / (1.0 + std::exp(-1.0)), 1e-6,
                      "expectation form matches the analytic fidelity");
    });

    // 11. The heavy-tailed channel family.
    run_criterion(11, "p_m channel: moments, f1 growth, Fock fidelity, no-EPR",
                  [](Criterion& c) {
        for (int m : {1, 10, 50}) {
            c.check_close(pm_normalization({m}), 1.0, 1e-6, "normalization");
            c.check_close(pm_second_moment({m}), 0.25, 1e-6, "second moment");
        }
        double prev = 0.0;
        for (int m : {1, 2, 5, 10, 20, 50}) {
            double v = f1({m});
            std::ostringstream tag;
            tag << "f1 strictly increasing at m=" << m;
            c.check(v > prev, tag.str());
            prev = v;
        }
        c.check_close(fock_input_fidelity({50}, 1), 0.992, 0.005, "Fock-|1> fidelity, m=50");
        for (int m : {1, 2, 10, 50})
            c.check(pm_channel_e1({m}) >= 1.0 - 1e-6, "E1 >= 1 (no EPR correlation)");
        c.check(pm_vacuum_fidelity({2}) > 0.5, "F > 1/2 at m = 2");
        c.check(pm_vacuum_fidelity({50}) > 0.5, "F > 1/2 at m = 50");
    });

    // 12. Monte Carlo statistics and reproducibility.
    run_criterion(12, "sampling statistics over 200 seeds + byte determinism",
                  [](Criterion& c) {
        auto st = make_dephased_cat({0.5, 0.3});
        auto f = TestFunction::exponential(1.0, {2.0});
        EprMeasurementConfig cfg = grid_cfg();
        cfg.n_samples = 20000;
        EprDistribution dist(st, cfg);
        double exact = dist.expectation(f, 1).mean;
        int bad = 0;
        for (int seed = 0; seed < 200; ++seed) {
            auto samples = dist.sample(cfg.n_samples, 1000 + seed);
            auto est = empirical_witness(samples, f);
            if (std::abs(est.mean - exact) > 4.0 * est.delta_e) ++bad;
        }
        std::ostringstream msg;
        msg << bad << " of 200 runs outside 4 delta_e";
        c.check(bad <= 2, msg.str());

        auto s1 = dist.sample(5000, 424242);
        auto s2 = dist.sample(5000, 424242);
        bool same = s1.size() == s2.size();
        std::ostringstream csv1, csv2;
        char buf[96];
        for (size_t i = 0; i < s1.size() && same; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s1[i].x1, s1[i].p2,
                          s1[i].o_epr);
            csv1 << buf;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s2[i].x1, s2[i].p2,
                          s2[i].o_epr);
            csv2 << buf;
        }
        c.check(same && csv1.str() == csv2.str(), "byte-identical resample");
    });

    if (g_only == 0) std::printf("%d of 12 criteria failed\n", g_failures);
    return g_failures;
}
