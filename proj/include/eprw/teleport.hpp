// teleport.hpp
// Braunstein-Kimble teleportation analysis.  The output fidelity for a
// vacuum (equivalently any coherent) input equals the EPR functional
// <exp(-(u^2 + v^2))> of the channel, and F >= 1 - E_1.  The protocol
// also acts in the characteristic representation as
//   C_out(lambda) = C_in(lambda) * C_AB(conj(lambda), lambda),
// which is kept as an independent route and as the path for channels
// given only by their characteristic function.

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "eprw/epr_measure.hpp"
#include "eprw/fock_state.hpp"
#include "eprw/phase_space.hpp"
#include "eprw/witness_bounds.hpp"

namespace eprw {

struct TeleportReport {
    double fidelity = 0.0;
    double e1 = 0.0;
    double lower_bound = 0.0;  // 1 - E_1
};

/// F >= 1 - E_1.
inline double em_fidelity_bound(double e1) {
    if (e1 < 0.0) throw std::invalid_argument("em_fidelity_bound: E_1 < 0");
    return 1.0 - e1;
}

/// Fidelity of the BK protocol through the channel rho_AB, evaluated as
/// the EPR-functional average <e^{-O_EPR}> together with E_1.
inline TeleportReport fidelity_via_epr(const TwoModeState& rho_ab,
                                       const EprMeasurementConfig& cfg = {}) {
    EprDistribution dist(rho_ab, cfg, /*widen_degree=*/2);
    TeleportReport rep;
    rep.fidelity = dist.expectation(TestFunction::exponential(1.0), 1).mean;
    rep.e1 = dist.expectation(TestFunction::power(1), 1).mean;
    rep.lower_bound = em_fidelity_bound(rep.e1);
    return rep;
}

/// Diagonal slice of a channel's characteristic function,
/// lambda -> C_AB(conj(lambda), lambda).
using ChannelCharFn = std::function<complexd(complexd)>;

inline ChannelCharFn channel_char_from_state(const TwoModeState& rho) {
    auto eval = std::make_shared<TwoModeCharEvaluator>(rho);
    return [eval](complexd lam) { return (*eval)(std::conj(lam), lam); };
}

/// C_out = C_in .* C_AB(conj(lambda), lambda) on the grid of c_in.
inline PhaseSpaceGrid bk_output_characteristic(const PhaseSpaceGrid& c_in,
                                               const ChannelCharFn& c_ab) {
    PhaseSpaceGrid out = c_in;
    for (int i = 0; i < out.nx; ++i)
        for (int j = 0; j < out.ny; ++j)
            out.at(i, j) = c_in.at(i, j) * c_ab(complexd(out.x(i), out.y(j)));
    int cx = out.nx / 2, cy = out.ny / 2;
    out.ok = c_in.ok && std::abs(out.at(cx, cy) - complexd{1.0, 0.0}) <= 1e-8;
    return out;
}

inline PhaseSpaceGrid coherent_characteristic_grid(complexd beta, double half_width,
                                                   int points) {
    PhaseSpaceGrid g = PhaseSpaceGrid::centered(half_width, points);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            complexd lam(g.x(i), g.y(j));
            g.at(i, j) = std::exp(-0.5 * std::norm(lam) + lam * std::conj(beta) -
                                  std::conj(lam) * beta);
        }
    return g;
}

/// BK fidelity for a coherent input via the characteristic route:
/// F = Tr[rho_in rho_out] = (1/pi) int C_out(l) C_in(-l) d^2 l.
inline double bk_coherent_fidelity(const ChannelCharFn& c_ab, complexd beta,
                                   double half_width = 7.0, int points = 257) {
    PhaseSpaceGrid c_in = coherent_characteristic_grid(beta, half_width, points);
    PhaseSpaceGrid c_out = bk_output_characteristic(c_in, c_ab);
    return overlap_from_characteristic(c_out, c_in);
}

}  // namespace eprw
