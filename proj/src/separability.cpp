#include "twinbeam/separability.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

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

}  // namespace

SeparabilityVerdict ppt_eigen_check(const CovarianceMatrix& cov) {
    const double scale = std::max(1.0, cov.m.cwiseAbs().maxCoeff());
    if (!cov.m.allFinite()) {
        throw std::domain_error("covariance matrix must be finite");
    }
    if ((cov.m - cov.m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::domain_error("covariance matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> real_eigs(cov.m,
                                                             Eigen::EigenvaluesOnly);
    if (real_eigs.eigenvalues().minCoeff() <= 0.0) {
        throw std::domain_error("covariance matrix must be positive definite");
    }

    // Partial-transpose symplectic form: the second mode carries -J.
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = -1.0;
    omega(3, 2) = 1.0;
    const std::complex<double> imag_quarter(0.0, 0.25);
    Eigen::Matrix4cd h = cov.m.cast<std::complex<double>>() +
                         imag_quarter * omega.cast<std::complex<double>>();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();

    double binding = std::numeric_limits<double>::quiet_NaN();
    try {
        const VariancePair v = variances_from_covariance(cov);
        binding = std::min(v.var_plus, v.var_minus);
    } catch (const std::domain_error&) {
        // Not of the twin-beam form; the eigenvalue alone decides.
    }
    return SeparabilityVerdict{min_eig >= -kSeparabilityEigSlack, min_eig, binding};
}

SeparabilityVerdict variance_criterion(const VariancePair& v) {
    if (!std::isfinite(v.var_plus) || !std::isfinite(v.var_minus) ||
        v.var_plus <= 0.0 || v.var_minus <= 0.0) {
        throw std::domain_error("variance pair must be finite and strictly positive");
    }
    if (v.var_plus < v.var_minus) {
        throw std::domain_error("variance criterion expects var_plus >= var_minus");
    }
    const bool minus_ok = v.var_minus >= 0.25 - kSeparabilityEigSlack;
    const bool plus_ok = v.var_plus >= 0.25 - kSeparabilityEigSlack;
    // Same quantity the matrix path reports: distance of the binding
    // variance from the boundary.
    return SeparabilityVerdict{minus_ok && plus_ok, v.var_minus - 0.25, v.var_minus};
}

std::optional<double> threshold_time(const TwinBeamParams& tb, const ChannelParams& cp) {
    check_channel(cp);
    if (!std::isfinite(tb.lambda) || tb.lambda < 0.0) {
        throw std::domain_error("twin-beam squeezing parameter must be finite and >= 0");
    }
    if (tb.lambda == 0.0) {
        return 0.0;  // already separable at t = 0, for every M
    }
    if (cp.m_thermal == 0.0) {
        return std::nullopt;  // pure loss: entangled at every finite time
    }
    const double shrink = -std::expm1(-2.0 * tb.lambda);  // 1 - e^{-2 lambda}
    return std::log1p(shrink / (2.0 * cp.m_thermal)) / cp.gamma_rate;
}

std::optional<double> threshold_time_from_photon_number(double n_mean,
                                                        const ChannelParams& cp) {
    check_channel(cp);
    if (!std::isfinite(n_mean) || n_mean < 0.0) {
        throw std::domain_error("mean photon number must be finite and >= 0");
    }
    if (n_mean == 0.0) {
        return 0.0;
    }
    if (cp.m_thermal == 0.0) {
        return std::nullopt;
    }
    const double shrink = std::sqrt(n_mean * (n_mean + 2.0)) - n_mean;
    return std::log1p(shrink / (2.0 * cp.m_thermal)) / cp.gamma_rate;
}

std::optional<double> threshold_tau(const TwinBeamParams& tb, const ChannelParams& cp) {
    const std::optional<double> ts = threshold_time(tb, cp);
    if (!ts) {
        return std::nullopt;
    }
    if (tb.lambda == 0.0) {
        return 0.0;
    }
    const double two_m = 2.0 * cp.m_thermal;
    const double gamma = 1.0 / (two_m + 1.0);
    // 1 - gamma = 2M / (2M + 1), written division-first to avoid the
    // cancellation in the literal subtraction at small M.
    const double form_drift =
        -std::log((two_m / (two_m + 1.0)) / (1.0 - gamma * std::exp(-2.0 * tb.lambda))) / gamma;
    const double form_log1p =
        (two_m + 1.0) * std::log1p(-std::expm1(-2.0 * tb.lambda) / two_m);
    const double tol = 1e-12 * std::max(1.0, std::abs(form_log1p));
    if (std::abs(form_drift - form_log1p) > tol) {
        throw std::runtime_error("threshold_tau: the two closed forms disagree beyond 1e-12");
    }
    return form_log1p;
}

std::optional<double> saturation_threshold(const ChannelParams& cp) {
    check_channel(cp);
    if (cp.m_thermal == 0.0) {
        return std::nullopt;
    }
    return std::log1p(0.5 / cp.m_thermal) / cp.gamma_rate;
}

}  // namespace twinbeam
