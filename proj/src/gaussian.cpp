#include "twinbeam/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twinbeam {

namespace {

void check_variance_pair(const VariancePair& v) {
    if (!std::isfinite(v.var_plus) || !std::isfinite(v.var_minus) ||
        v.var_plus <= 0.0 || v.var_minus <= 0.0) {
        throw std::domain_error("variance pair must be finite and strictly positive");
    }
    // Heisenberg bound for this family; equality for the pure twin beam.
    if (v.var_plus * v.var_minus < 0.0625 * (1.0 - 1e-9)) {
        throw std::domain_error("variance pair violates the uncertainty bound S+^2 S-^2 >= 1/16");
    }
}

void check_twin_beam(const TwinBeamParams& tb) {
    if (!std::isfinite(tb.lambda) || tb.lambda < 0.0) {
        throw std::domain_error("twin-beam squeezing parameter must be finite and >= 0");
    }
}

double squared(double v) { return v * v; }

}  // namespace

TwinBeamParams twin_beam_from_lambda(double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw std::domain_error("twin-beam squeezing parameter must be finite and >= 0");
    }
    const double sh = std::sinh(lambda);
    return TwinBeamParams{lambda, std::tanh(lambda), 2.0 * sh * sh};
}

TwinBeamParams twin_beam_from_photon_number(double n_mean) {
    if (!std::isfinite(n_mean) || n_mean < 0.0) {
        throw std::domain_error("mean photon number must be finite and >= 0");
    }
    return twin_beam_from_lambda(std::asinh(std::sqrt(0.5 * n_mean)));
}

VariancePair initial_variances(const TwinBeamParams& tb) {
    check_twin_beam(tb);
    return VariancePair{0.25 * std::exp(2.0 * tb.lambda), 0.25 * std::exp(-2.0 * tb.lambda)};
}

CovarianceMatrix covariance_from_variances(const VariancePair& v) {
    check_variance_pair(v);
    const double c = 0.5 * (v.var_plus + v.var_minus);
    const double d = 0.5 * (v.var_plus - v.var_minus);
    CovarianceMatrix cov;
    cov.m << c, 0, d, 0,
             0, c, 0, -d,
             d, 0, c, 0,
             0, -d, 0, c;
    return cov;
}

VariancePair variances_from_covariance(const CovarianceMatrix& cov) {
    const double c = cov.m(0, 0);
    const double d = cov.m(0, 2);
    CovarianceMatrix expected = covariance_from_variances(VariancePair{c + d, c - d});
    const double scale = std::max(1.0, cov.m.cwiseAbs().maxCoeff());
    if (((cov.m - expected.m).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
        throw std::domain_error("covariance matrix is not of the twin-beam form");
    }
    return VariancePair{c + d, c - d};
}

double wigner_eval(const VariancePair& v, const PhasePoint& p) {
    check_variance_pair(v);
    if (!std::isfinite(p.x1) || !std::isfinite(p.y1) || !std::isfinite(p.x2) ||
        !std::isfinite(p.y2)) {
        throw std::domain_error("phase-space point must be finite");
    }
    const double sp = v.var_plus;
    const double sm = v.var_minus;
    const double two_pi = 2.0 * std::numbers::pi;
    const double norm = 1.0 / (two_pi * sp * two_pi * sm);
    const double exponent = -(squared(p.x1 + p.x2) / (4.0 * sp) +
                              squared(p.y1 + p.y2) / (4.0 * sm) +
                              squared(p.x1 - p.x2) / (4.0 * sm) +
                              squared(p.y1 - p.y2) / (4.0 * sp));
    return norm * std::exp(exponent);
}

}  // namespace twinbeam
