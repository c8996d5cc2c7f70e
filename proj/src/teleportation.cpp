#include "twinbeam/teleportation.hpp"

#include <cmath>
#include <stdexcept>

namespace twinbeam {

namespace {

void check_eta(double eta) {
    if (!std::isfinite(eta) || eta <= 0.0 || eta > 1.0) {
        throw std::domain_error("teleportation efficiency must lie in (0, 1]");
    }
}

double squared(double v) { return v * v; }

}  // namespace

CoherentGaussian teleport_coherent(const CoherentGaussian& input,
                                   const VariancePair& channel_state) {
    if (std::abs(input.var - 0.25) > 1e-12) {
        throw std::domain_error("only coherent inputs (var = 1/4) are modeled");
    }
    if (!std::isfinite(channel_state.var_minus) || channel_state.var_minus <= 0.0) {
        throw std::domain_error("channel variances must be finite and positive");
    }
    // Unit gain: the displacement survives, each quadrature gains 2 S-^2.
    return CoherentGaussian{input.mean_x, input.mean_y,
                            input.var + 2.0 * channel_state.var_minus};
}

double gaussian_overlap_fidelity(const CoherentGaussian& a, const CoherentGaussian& b) {
    if (!std::isfinite(a.var) || a.var <= 0.0 || !std::isfinite(b.var) || b.var <= 0.0) {
        throw std::domain_error("overlap requires strictly positive variances");
    }
    const double total = a.var + b.var;
    const double dist_sq = squared(a.mean_x - b.mean_x) + squared(a.mean_y - b.mean_y);
    return std::exp(-dist_sq / (2.0 * total)) / (2.0 * total);
}

double fidelity(const TwinBeamParams& tb, const ChannelParams& cp, double t,
                const TeleportationParams& tp) {
    check_eta(tp.eta);
    const double sm = evolve(tb, cp, t).variances.var_minus;
    return 1.0 / (1.0 + 4.0 * sm + (1.0 - tp.eta) / tp.eta);
}

double fidelity_expanded(const TwinBeamParams& tb, const ChannelParams& cp, double t,
                         const TeleportationParams& tp) {
    check_eta(tp.eta);
    if (!std::isfinite(t) || t < 0.0) {
        throw std::domain_error("time must be finite and >= 0");
    }
    const double gt = cp.gamma_rate * t;
    return 1.0 / (1.0 + std::exp(-2.0 * tb.lambda - gt) +
                  (1.0 - std::exp(-gt)) * (2.0 * cp.m_thermal + 1.0) +
                  (1.0 - tp.eta) / tp.eta);
}

bool quantum_teleportation_possible(const TwinBeamParams& tb, const ChannelParams& cp,
                                    double t) {
    // Strict inequality: at F = 1/2 the resource is already separable.
    return fidelity(tb, cp, t, TeleportationParams{1.0}) > 0.5;
}

}  // namespace twinbeam
