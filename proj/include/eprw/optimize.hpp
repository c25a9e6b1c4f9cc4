// optimize.hpp
// Witness-parameter optimization: coarse grid scan over (C, D) and the
// local phases, followed by derivative-free simplex refinement.  The
// scan and refinement evaluate expectations through the radial profile
// of the production joint-quadrature grid (one grid build per phase
// pair, then microseconds per candidate); a reported detection is
// confirmed at the end through the full-resolution grid route with
// converged bounds.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eprw/baselines.hpp"
#include "eprw/epr_measure.hpp"
#include "eprw/noise.hpp"
#include "eprw/witness_bounds.hpp"

namespace eprw {

struct OptimizationSpec {
    enum class Objective { Violation, Significance };
    enum class Mode { Exact, Empirical };

    double c_min = 0.02, c_max = 10.0;   // decay-rate box (0, 10]
    double d_min = -80.0, d_max = 80.0;  // linear-coefficient box
    double phi_a_min = 0.0, phi_a_max = 0.0;  // [min, max); equal = fixed
    double phi_b_min = 0.0, phi_b_max = 0.0;
    bool include_linear_term = true;  // false: F = e^{-Cz} only (M = 0)
    Objective objective = Objective::Violation;
    Mode mode = Mode::Exact;
    int grid_c = 32, grid_d = 32, grid_phi = 8;
    int scan_grid_points = 513;  // quadrature grid used during the search
    double tolerance = 1e-6;  // simplex objective spread
    bool final_grid_check = true;
};

struct OptimizationResult {
    double c = 1.0, d = 0.0, phi_a = 0.0, phi_b = 0.0;
    double objective_value = 0.0;
    WitnessEstimate estimate;
    SeparabilityBounds bounds;
    Verdict verdict_result;
    bool detected = false;
};

namespace detail {

/// Maximize f over a box with the Nelder-Mead simplex.
inline std::pair<std::vector<double>, double> nelder_mead_max(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, const std::vector<double>& step,
    const std::vector<double>& lo, const std::vector<double>& hi, double tol,
    int max_iter = 400) {
    const size_t n = start.size();
    auto clamp = [&](std::vector<double> x) {
        for (size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
        return x;
    };
    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> val(n + 1);
    for (size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += step[i];
        pts[i + 1] = clamp(pts[i + 1]);
    }
    for (size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);

    for (int it = 0; it < max_iter; ++it) {
        // sort descending (maximization)
        for (size_t a = 0; a <= n; ++a)
            for (size_t b = a + 1; b <= n; ++b)
                if (val[b] > val[a]) {
                    std::swap(val[a], val[b]);
                    std::swap(pts[a], pts[b]);
                }
        if (std::abs(val[0] - val[n]) < tol) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + t * (centroid[j] - pts[n][j]);
            return clamp(x);
        };

        auto xr = blend(1.0);
        double fr = f(xr);
        if (fr > val[0]) {
            auto xe = blend(2.0);
            double fe = f(xe);
            if (fe > fr) {
                pts[n] = xe;
                val[n] = fe;
            } else {
                pts[n] = xr;
                val[n] = fr;
            }
        } else if (fr > val[n - 1]) {
            pts[n] = xr;
            val[n] = fr;
        } else {
            auto xc = blend(-0.5);
            double fc = f(xc);
            if (fc > val[n]) {
                pts[n] = xc;
                val[n] = fc;
            } else {
                for (size_t i = 1; i <= n; ++i) {
                    for (size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    size_t best = 0;
    for (size_t i = 1; i <= n; ++i)
        if (val[i] > val[best]) best = i;
    return {pts[best], val[best]};
}

struct WitnessObjective {
    // one of the two evaluators is active
    const EprDistribution::RadialProfile* profile = nullptr;
    const std::vector<HomodyneSample>* samples = nullptr;
    OptimizationSpec::Objective objective;
    long long n_for_error;

    double operator()(double c, double d, bool with_linear) const {
        TestFunction f = with_linear ? TestFunction::exponential(c, {d})
                                     : TestFunction::exponential(c);
        auto bounds = separability_bounds(f);
        if (!bounds.converged) return -1e300;
        double mean, delta_f;
        long long n_err = n_for_error;
        if (profile) {
            auto md = profile->mean_and_deltaf(f);
            mean = md.first;
            delta_f = md.second;
        } else {
            auto est = empirical_witness(*samples, f);
            mean = est.mean;
            delta_f = est.delta_f;
            n_err = est.samples_used;
        }
        double violation = std::max(mean - bounds.f_max, bounds.f_min - mean);
        if (objective == OptimizationSpec::Objective::Violation) return violation;
        double de = delta_f / std::sqrt(static_cast<double>(std::max<long long>(1, n_err)));
        if (de <= 0.0) return (violation > 0.0) ? 1e300 : -1e300;
        return violation / de;
    }
};

}  // namespace detail

/// Search {C, D, phi_A, phi_B} for the strongest violation of the
/// separability bounds.  Exact mode evaluates expectations of the state;
/// empirical mode optimizes over one fixed recorded sample set (phases
/// fixed, mirroring an experiment where data is collected once).
/// `detected` is never set unless the final verdict (grid route in
/// exact mode) confirms the violation against converged bounds.
inline OptimizationResult optimize_witness(
    const TwoModeState& rho, const OptimizationSpec& spec,
    const EprMeasurementConfig& base_cfg = {},
    const std::vector<HomodyneSample>* recorded = nullptr) {
    const bool empirical = spec.mode == OptimizationSpec::Mode::Empirical;
    if (empirical && recorded == nullptr)
        throw std::invalid_argument("optimize_witness: empirical mode needs samples");

    std::vector<std::pair<double, double>> phases;
    if (empirical || (spec.phi_a_min == spec.phi_a_max &&
                      spec.phi_b_min == spec.phi_b_max)) {
        phases.push_back({spec.phi_a_min, spec.phi_b_min});
    } else {
        for (int i = 0; i < spec.grid_phi; ++i)
            for (int j = 0; j < spec.grid_phi; ++j)
                phases.push_back({spec.phi_a_min + (spec.phi_a_max - spec.phi_a_min) *
                                                       i / spec.grid_phi,
                                  spec.phi_b_min + (spec.phi_b_max - spec.phi_b_min) *
                                                       j / spec.grid_phi});
    }

    std::vector<double> c_grid, d_grid;
    for (int i = 0; i < spec.grid_c; ++i)
        c_grid.push_back(spec.c_min +
                         (spec.c_max - spec.c_min) * i / (spec.grid_c - 1.0));
    if (spec.include_linear_term) {
        for (int i = 0; i < spec.grid_d; ++i)
            d_grid.push_back(spec.d_min +
                             (spec.d_max - spec.d_min) * i / (spec.grid_d - 1.0));
        if (spec.d_min < 0.0 && spec.d_max > 0.0) d_grid.push_back(0.0);
    } else {
        d_grid.push_back(0.0);
    }

    OptimizationResult best;
    best.objective_value = -1e300;
    std::optional<EprDistribution::RadialProfile> best_profile;

    for (auto [pa, pb] : phases) {
        EprMeasurementConfig cfg = base_cfg;
        cfg.phi_a = pa;
        cfg.phi_b = pb;
        cfg.grid_points = spec.scan_grid_points;
        std::optional<EprDistribution::RadialProfile> profile;
        detail::WitnessObjective obj;
        obj.objective = spec.objective;
        obj.n_for_error = base_cfg.n_samples;
        if (empirical) {
            obj.samples = recorded;
        } else {
            profile.emplace(EprDistribution(rho, cfg).radial_profile());
            obj.profile = &*profile;
        }

        double local_best = -1e300, lc = c_grid[0], ld = d_grid[0];
        for (double c : c_grid)
            for (double d : d_grid) {
                double v = obj(c, d, spec.include_linear_term);
                if (v > local_best) {
                    local_best = v;
                    lc = c;
                    ld = d;
                }
            }

        auto f = [&](const std::vector<double>& x) {
            return obj(x[0], x[1], spec.include_linear_term);
        };
        double c_step = (spec.c_max - spec.c_min) / (2.0 * spec.grid_c);
        double d_step = spec.include_linear_term
                            ? (spec.d_max - spec.d_min) / (2.0 * spec.grid_d)
                            : 0.0;
        auto [xb, vb] = detail::nelder_mead_max(
            f, {lc, ld}, {std::max(c_step, 1e-3), std::max(d_step, 1e-3)},
            {spec.c_min, spec.include_linear_term ? spec.d_min : 0.0},
            {spec.c_max, spec.include_linear_term ? spec.d_max : 0.0},
            spec.tolerance);

        if (vb > best.objective_value) {
            best.objective_value = vb;
            best.c = xb[0];
            best.d = spec.include_linear_term ? xb[1] : 0.0;
            best.phi_a = pa;
            best.phi_b = pb;
            if (profile) best_profile = std::move(profile);
        }
    }

    // Final evaluation and verdict at the optimum.
    TestFunction f_best = spec.include_linear_term
                              ? TestFunction::exponential(best.c, {best.d})
                              : TestFunction::exponential(best.c);
    best.bounds = separability_bounds(f_best);
    EprMeasurementConfig cfg = base_cfg;
    cfg.phi_a = best.phi_a;
    cfg.phi_b = best.phi_b;
    if (empirical) {
        best.estimate = empirical_witness(*recorded, f_best);
    } else if (spec.final_grid_check) {
        best.estimate = exact_expectation(rho, f_best, cfg);
    } else {
        if (!best_profile) {
            cfg.grid_points = spec.scan_grid_points;
            best_profile = EprDistribution(rho, cfg).radial_profile();
        }
        auto md = best_profile->mean_and_deltaf(f_best);
        best.estimate.mean = md.first;
        best.estimate.delta_f = md.second;
        best.estimate.samples_used = base_cfg.n_samples;
        best.estimate.delta_e =
            md.second / std::sqrt(static_cast<double>(std::max<long long>(1, base_cfg.n_samples)));
        best.estimate.mode = WitnessEstimate::Mode::Exact;
    }
    best.verdict_result = verdict(best.estimate, best.bounds);
    best.detected = best.verdict_result.entangled;
    return best;
}

/// Largest decoherence time t = log(1/eta) at which the criterion still
/// detects entanglement, by bisection to `tol`.  Returns 0 when not
/// detected at t = 0 and +infinity when still detected at `t_cap`.
enum class DetectionCriterion { FunctionalWitness, Simon };

inline double detection_time(const TwoModeState& rho0, double n_th,
                             DetectionCriterion criterion,
                             const OptimizationSpec& spec = {},
                             double tol = 1e-3, double t_cap = 8.0) {
    auto detected_at = [&](double t) {
        NoiseSpec ns;
        ns.eta = std::exp(-t);
        ns.n_th = n_th;
        TwoModeState st = (t == 0.0) ? rho0 : apply_loss_thermal(rho0, ns);
        if (criterion == DetectionCriterion::Simon) return simon_test(st).entangled;
        OptimizationSpec fast = spec;
        fast.final_grid_check = false;  // bisection decisions via the atom route
        return optimize_witness(st, fast).detected;
    };

    if (!detected_at(0.0)) return 0.0;
    double lo = 0.0, hi = 0.25;
    while (detected_at(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > t_cap) return std::numeric_limits<double>::infinity();
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (detected_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace eprw
