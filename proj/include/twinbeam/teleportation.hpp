#pragma once

#include "twinbeam/channel.hpp"
#include "twinbeam/gaussian.hpp"

namespace twinbeam {

/// Efficiency of the teleportation link. Enters the fidelity only through
/// the additive excess-noise term (1 - eta)/eta; eta = 1 is the ideal case.
struct TeleportationParams {
    double eta = 1.0;  ///< in (0, 1]
};

/// Isotropic single-mode Gaussian in phase space: mean (mean_x, mean_y) and
/// one common per-quadrature variance. A coherent state has var = 1/4.
struct CoherentGaussian {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var = 0.25;
};

/// Unit-gain teleportation of a coherent state through a channel whose
/// shared entangled resource has the given combination variances: the mean
/// is transferred exactly and each quadrature picks up excess variance
/// 2 S-^2. Requires a coherent input (var = 1/4).
CoherentGaussian teleport_coherent(const CoherentGaussian& input,
                                   const VariancePair& channel_state);

/// Overlap fidelity of two isotropic Gaussians,
/// F = pi * integral of W_a W_b over phase space
///   = exp(-|mean_a - mean_b|^2 / (2 (var_a + var_b))) / (2 (var_a + var_b)).
double gaussian_overlap_fidelity(const CoherentGaussian& a, const CoherentGaussian& b);

/// Coherent-state teleportation fidelity through the evolved channel:
/// F = 1 / (1 + 4 S-^2(t) + (1 - eta)/eta).
double fidelity(const TwinBeamParams& tb, const ChannelParams& cp, double t,
                const TeleportationParams& tp = {});

/// The same fidelity written out through the channel parameters,
/// F = 1 / (1 + e^{-2 lambda - Gamma t} + (1 - e^{-Gamma t})(2M+1) + (1-eta)/eta).
/// Kept as a second, independent arithmetic route for cross-checking.
double fidelity_expanded(const TwinBeamParams& tb, const ChannelParams& cp, double t,
                         const TeleportationParams& tp = {});

/// True when teleportation beats every classical strategy, i.e. F > 1/2 at
/// eta = 1. Equivalent to entanglement survival S-^2(t) < 1/4; the boundary
/// F = 1/2 counts as not quantum (the state there is already separable).
bool quantum_teleportation_possible(const TwinBeamParams& tb, const ChannelParams& cp,
                                    double t);

}  // namespace twinbeam
