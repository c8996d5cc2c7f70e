#pragma once

#include <optional>

#include "twinbeam/channel.hpp"
#include "twinbeam/gaussian.hpp"

namespace twinbeam {

// Verdicts within kSeparabilityEigSlack of the boundary are classified
// separable: the positive-partial-transpose set is closed.
inline constexpr double kSeparabilityEigSlack = 1e-12;

/// Outcome of a separability decision.
struct SeparabilityVerdict {
    bool separable;
    /// Smallest eigenvalue of V + (i/4) Omega, where Omega carries the
    /// mode-2 sign flip of partial transposition. Negative means entangled.
    double min_eigenvalue;
    /// The variance that decides the verdict (S-^2 for this family); NaN if
    /// the covariance matrix is not of the twin-beam form.
    double binding_variance;
};

/// Separability via the partial-transpose matrix condition: builds the
/// Hermitian matrix V + (i/4) Omega and inspects its spectrum. Requires a
/// symmetric, positive-definite covariance matrix.
SeparabilityVerdict ppt_eigen_check(const CovarianceMatrix& cov);

/// Separability via the variance condition: separable iff both combination
/// variances are >= 1/4. Requires var_plus >= var_minus (which holds for
/// every channel-evolved twin beam), so S-^2 is the binding one.
SeparabilityVerdict variance_criterion(const VariancePair& v);

/// Time at which the evolved state crosses into separability:
/// t_s = log(1 + (1 - e^{-2 lambda}) / (2M)) / Gamma.
/// Returns 0 for lambda = 0; std::nullopt when M = 0 and lambda > 0
/// (pure loss never destroys the entanglement).
std::optional<double> threshold_time(const TwinBeamParams& tb, const ChannelParams& cp);

/// Same threshold via the mean photon number N, using
/// 1 - e^{-2 lambda} = sqrt(N(N+2)) - N.
std::optional<double> threshold_time_from_photon_number(double n_mean, const ChannelParams& cp);

/// Threshold in rescaled time, tau_s = (2M+1) Gamma t_s. Evaluated through
/// two algebraically equal closed forms which are required to agree to
/// 1e-12; disagreement raises std::runtime_error.
std::optional<double> threshold_tau(const TwinBeamParams& tb, const ChannelParams& cp);

/// Large-squeezing limit of the threshold, log(1 + 1/(2M)) / Gamma.
/// threshold_time is bounded by this value for every lambda.
std::optional<double> saturation_threshold(const ChannelParams& cp);

}  // namespace twinbeam
