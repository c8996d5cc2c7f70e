#include "twinbeam/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace twinbeam {

namespace {

void check_channel(const ChannelParams& cp) {
    if (!std::isfinite(cp.gamma_rate) || cp.gamma_rate <= 0.0) {
        throw std::domain_error("damping rate must be finite and > 0");
    }
    if (!std::isfinite(cp.m_thermal) || cp.m_thermal < 0.0) {
        throw std::domain_error("thermal photon number must be finite and >= 0");
    }
}

double squared(double v) { return v * v; }

}  // namespace

double drift_coefficient(const ChannelParams& cp) {
    check_channel(cp);
    return 1.0 / (2.0 * cp.m_thermal + 1.0);
}

EvolutionResult evolve_pair(const VariancePair& initial, const ChannelParams& cp, double t) {
    check_channel(cp);
    if (!std::isfinite(t) || t < 0.0) {
        throw std::domain_error("evolution time must be finite and >= 0");
    }
    const double gamma = drift_coefficient(cp);
    const double gt = cp.gamma_rate * t;            // = gamma * tau
    const double tau = gt / gamma;
    const double decay = std::exp(-gt);
    const double diffusion = (1.0 - decay) / (4.0 * gamma);
    VariancePair evolved{decay * initial.var_plus + diffusion,
                         decay * initial.var_minus + diffusion};
    return EvolutionResult{evolved, t, tau, diffusion};
}

EvolutionResult evolve(const TwinBeamParams& tb, const ChannelParams& cp, double t) {
    return evolve_pair(initial_variances(tb), cp, t);
}

double green_function(const ChannelParams& cp, double t, double x, double x_prime) {
    check_channel(cp);
    if (!std::isfinite(t) || t <= 0.0) {
        throw std::domain_error("propagator kernel requires t > 0");
    }
    const double gt = cp.gamma_rate * t;
    const double gamma = drift_coefficient(cp);
    const double d2 = (1.0 - std::exp(-gt)) / (4.0 * gamma);
    const double mean = x_prime * std::exp(-0.5 * gt);
    return std::exp(-squared(x - mean) / (2.0 * d2)) / std::sqrt(2.0 * std::numbers::pi * d2);
}

VariancePair stationary_state(const ChannelParams& cp) {
    check_channel(cp);
    const double var = 0.25 * (2.0 * cp.m_thermal + 1.0);
    return VariancePair{var, var};
}

McEstimate evolve_by_convolution(const TwinBeamParams& tb, const ChannelParams& cp,
                                 double t, const PhasePoint& p,
                                 std::size_t mc_samples, std::uint64_t seed) {
    check_channel(cp);
    if (!std::isfinite(t) || t <= 0.0) {
        throw std::domain_error("convolution requires t > 0");
    }
    if (mc_samples < 10000) {
        throw std::domain_error("convolution estimate needs at least 10^4 samples");
    }
    const VariancePair sigma0 = initial_variances(tb);

    const double gt = cp.gamma_rate * t;
    const double gamma = drift_coefficient(cp);
    const double d2 = (1.0 - std::exp(-gt)) / (4.0 * gamma);
    const double shrink = std::exp(-0.5 * gt);
    const double kernel_norm = squared(squared(1.0 / std::sqrt(2.0 * std::numbers::pi * d2)));
    const double inv_2d2 = 1.0 / (2.0 * d2);

    // The initial Gaussian factorizes in the rotated coordinates
    // (x1 ± x2)/sqrt(2), (y1 ± y2)/sqrt(2); draw those independently.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n_xp(0.0, std::sqrt(sigma0.var_plus));
    std::normal_distribution<double> n_xm(0.0, std::sqrt(sigma0.var_minus));
    std::normal_distribution<double> n_yp(0.0, std::sqrt(sigma0.var_minus));
    std::normal_distribution<double> n_ym(0.0, std::sqrt(sigma0.var_plus));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        const double uxp = n_xp(rng);
        const double uxm = n_xm(rng);
        const double uyp = n_yp(rng);
        const double uym = n_ym(rng);
        const double x1 = (uxp + uxm) * inv_sqrt2;
        const double x2 = (uxp - uxm) * inv_sqrt2;
        const double y1 = (uyp + uym) * inv_sqrt2;
        const double y2 = (uyp - uym) * inv_sqrt2;
        const double e = squared(p.x1 - shrink * x1) + squared(p.x2 - shrink * x2) +
                         squared(p.y1 - shrink * y1) + squared(p.y2 - shrink * y2);
        const double w = kernel_norm * std::exp(-e * inv_2d2);
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(mc_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
    return McEstimate{mean, std::sqrt(var / n), mc_samples};
}

}  // namespace twinbeam
