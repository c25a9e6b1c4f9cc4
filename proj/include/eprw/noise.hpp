// noise.hpp
// Thermal attenuation channel: each selected mode is mixed with an
// independent thermal mode of occupation n_th on a beam splitter of
// transmissivity eta (a_out = sqrt(eta) a_in + sqrt(1-eta) v).  Exact
// Kraus-sum implementation; every Kraus operator is a single Fock
// ladder band, so one application costs O(dim^2).

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eprw/constants.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/transforms.hpp"

namespace eprw {

struct NoiseSpec {
    enum class Stage { Channel, Detection };
    double eta = 1.0;   // transmissivity in (0, 1]
    double n_th = 0.0;  // thermal occupation >= 0
    Stage stage = Stage::Channel;
};

namespace detail {

struct BandedKraus {
    int offset;                  // n_out = n_in + offset
    std::vector<double> amp;     // indexed by n_in
};

/// Kraus family of the thermal attenuator at system cutoff d:
/// K_{l,k}[n] = sqrt(t_k) <n+k-l, l| U_bs(theta) |n, k>, cos(theta)^2 = eta.
inline std::vector<BandedKraus> thermal_kraus(int d, double eta, double n_th,
                                              double weight_tail = 1e-14) {
    if (eta <= 0.0 || eta > 1.0)
        throw std::invalid_argument("thermal_kraus: eta must lie in (0, 1]");
    if (n_th < 0.0) throw std::invalid_argument("thermal_kraus: n_th < 0");
    double theta = std::acos(std::min(1.0, std::sqrt(eta)));

    int k_max = 0;
    if (n_th > 0.0) {
        double q = n_th / (1.0 + n_th);
        k_max = static_cast<int>(std::ceil(std::log(weight_tail) / std::log(q)));
    }

    std::vector<BandedKraus> ops;
    for (int k = 0; k <= k_max; ++k) {
        double t_k = (n_th == 0.0)
                         ? (k == 0 ? 1.0 : 0.0)
                         : std::pow(n_th / (1.0 + n_th), k) / (1.0 + n_th);
        if (t_k <= 0.0) continue;
        double sq = std::sqrt(t_k);
        for (int l = 0; l <= d - 1 + k; ++l) {
            BandedKraus op;
            op.offset = k - l;
            op.amp.assign(d, 0.0);
            bool nonzero = false;
            for (int n = 0; n < d; ++n) {
                int n_out = n + k - l;
                if (n_out < 0 || n_out >= d) continue;
                int N = n + k;
                if (l > N) continue;
                const MatrixXd& blk = detail::bs_block(N, theta);
                op.amp[n] = sq * blk(n_out, n);
                nonzero = nonzero || op.amp[n] != 0.0;
            }
            if (nonzero) ops.push_back(std::move(op));
        }
    }
    return ops;
}

/// rho -> sum_K (K x I) rho (K^dag x I) with banded K acting on mode A.
inline MatrixXcd apply_banded_kraus_mode_a(const MatrixXcd& rho, int da, int db,
                                           const std::vector<BandedKraus>& ops) {
    MatrixXcd out = MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto& op : ops) {
        for (int m = 0; m < da; ++m) {
            int mi = m - op.offset;
            if (mi < 0 || mi >= da || op.amp[mi] == 0.0) continue;
            for (int mp = 0; mp < da; ++mp) {
                int mpi = mp - op.offset;
                if (mpi < 0 || mpi >= da || op.amp[mpi] == 0.0) continue;
                double w = op.amp[mi] * op.amp[mpi];
                out.block(m * db, mp * db, db, db) +=
                    w * rho.block(mi * db, mpi * db, db, db);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Thermal attenuation on one mode, padding the cutoff for thermal gain.
/// Trace deficit beyond 1e-6 clears `converged`.
inline TwoModeState apply_loss_thermal_mode(const TwoModeState& s, double eta,
                                            double n_th, int mode) {
    if (eta == 1.0 && n_th == 0.0) return s;
    TwoModeState work = (mode == 0) ? s : swap_modes(s);

    int pad = 0;
    if (n_th > 0.0) {
        double q = n_th / (1.0 + n_th);
        pad = static_cast<int>(std::ceil(std::log(1e-12) / std::log(q)));
    }
    int da = std::min(kMaxModeDim, work.dim_a + pad);
    work = pad_state(work, da, work.dim_b);

    auto ops = detail::thermal_kraus(work.dim_a, eta, n_th);
    double trace_in = work.trace();
    work.rho = detail::apply_banded_kraus_mode_a(work.rho, work.dim_a, work.dim_b, ops);
    double deficit = std::abs(work.trace() - trace_in);
    if (deficit > 1e-6) work.converged = false;
    work.rehermitize();
    work.refresh_converged();
    return (mode == 0) ? work : swap_modes(work);
}

/// Channel of NoiseSpec applied to the selected modes (independent
/// environments).
inline TwoModeState apply_loss_thermal(const TwoModeState& s, const NoiseSpec& spec,
                                       bool on_a = true, bool on_b = true) {
    TwoModeState out = s;
    if (on_a) out = apply_loss_thermal_mode(out, spec.eta, spec.n_th, 0);
    if (on_b) out = apply_loss_thermal_mode(out, spec.eta, spec.n_th, 1);
    return out;
}

/// States along a decoherence trajectory: at time t the channel has
/// eta = exp(-t) on both modes.
inline std::vector<TwoModeState> decoherence_trajectory(
    const TwoModeState& rho0, double n_th, const std::vector<double>& times) {
    std::vector<TwoModeState> out;
    out.reserve(times.size());
    double prev = -1.0;
    for (double t : times) {
        if (t < 0.0 || t < prev)
            throw std::invalid_argument("decoherence_trajectory: times must be increasing and >= 0");
        prev = t;
        NoiseSpec spec;
        spec.eta = std::exp(-t);
        spec.n_th = n_th;
        out.push_back(t == 0.0 ? rho0 : apply_loss_thermal(rho0, spec));
    }
    return out;
}

}  // namespace eprw
