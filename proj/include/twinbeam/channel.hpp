#pragma once

#include <cstddef>
#include <cstdint>

#include "twinbeam/gaussian.hpp"

namespace twinbeam {

/// Parameters of the noisy propagation channel: equal damping rate Gamma
/// for both modes and M background thermal photons per mode.
struct ChannelParams {
    double gamma_rate;  ///< damping rate, > 0, units 1/time
    double m_thermal;   ///< thermal photon number of the reservoir, >= 0
};

/// Drift coefficient gamma = 1/(2M + 1), in (0, 1].
double drift_coefficient(const ChannelParams& cp);

/// Channel-evolved variances together with both time parameterizations.
/// The clocks satisfy gamma * tau = Gamma * t.
struct EvolutionResult {
    VariancePair variances;  ///< evolved (S+^2, S-^2)
    double time;             ///< unrescaled time t
    double tau;              ///< rescaled time tau = Gamma t (2M + 1)
    double diffusion;        ///< D^2 = (1 - e^{-gamma tau}) / (4 gamma)
};

/// Closed-form channel evolution of a twin beam for a time t >= 0:
/// S±^2 = e^{-gamma tau} sigma±^2 + D^2.
EvolutionResult evolve(const TwinBeamParams& tb, const ChannelParams& cp, double t);

/// Same closed form starting from an arbitrary variance pair. The map
/// composes: evolving by t1 then t2 equals evolving by t1 + t2.
EvolutionResult evolve_pair(const VariancePair& initial, const ChannelParams& cp, double t);

/// One-dimensional Gaussian propagator kernel of the channel: a normalized
/// density in x, centered at x' e^{-gamma tau / 2} with variance D^2.
/// Requires t > 0 (at t = 0 the kernel degenerates to a delta function).
double green_function(const ChannelParams& cp, double t, double x, double x_prime);

/// Stationary variances ((2M+1)/4, (2M+1)/4), the t -> infinity limit of
/// evolve for every initial state.
VariancePair stationary_state(const ChannelParams& cp);

/// A Monte-Carlo estimate with its one-sigma statistical error.
struct McEstimate {
    double value;
    double std_error;
    std::size_t samples;
};

/// Monte-Carlo evaluation of the evolved Wigner function at p: draws initial
/// phase-space points from the twin-beam Gaussian and averages the product
/// of the four propagator kernels. Reproducible for a fixed seed; sums are
/// accumulated in a fixed order. Requires t > 0 and mc_samples >= 10^4.
McEstimate evolve_by_convolution(const TwinBeamParams& tb, const ChannelParams& cp,
                                 double t, const PhasePoint& p,
                                 std::size_t mc_samples, std::uint64_t seed);

}  // namespace twinbeam
