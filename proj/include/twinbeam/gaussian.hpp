#pragma once

#include <Eigen/Dense>

namespace twinbeam {

// Quadrature convention used throughout the library: x = (a + a^dag)/2,
// y = (a - a^dag)/(2i), so the vacuum has variance 1/4 in every quadrature.
inline constexpr double kVacuumVariance = 0.25;

/// Parameterization of a twin beam (two-mode squeezed vacuum).
///
/// The three fields are mutually consistent and fixed by the construction
/// functions: x = tanh(lambda), n_mean = 2 sinh^2(lambda) = 2 x^2 / (1 - x^2).
struct TwinBeamParams {
    double lambda;  ///< squeezing / amplifier gain, >= 0
    double x;       ///< Fock-expansion weight, in [0, 1)
    double n_mean;  ///< total mean photon number of the two modes
};

/// Builds consistent twin-beam parameters from the squeezing parameter.
/// Throws std::domain_error for negative or non-finite input.
TwinBeamParams twin_beam_from_lambda(double lambda);

/// Inverse parameterization: lambda = asinh(sqrt(n_mean / 2)).
/// Throws std::domain_error for negative or non-finite input.
TwinBeamParams twin_beam_from_photon_number(double n_mean);

/// Variances of the two independent quadrature combinations that
/// characterize a (zero-mean) twin-beam-type Gaussian state:
/// var_plus belongs to (x1+x2)/sqrt(2) and (y1-y2)/sqrt(2),
/// var_minus to (x1-x2)/sqrt(2) and (y1+y2)/sqrt(2).
struct VariancePair {
    double var_plus;
    double var_minus;
};

/// Variances of the pure twin beam: (e^{2 lambda}/4, e^{-2 lambda}/4).
/// Their product is the purity bound 1/16.
VariancePair initial_variances(const TwinBeamParams& tb);

/// A point of two-mode phase space, ordered (x1, y1, x2, y2).
struct PhasePoint {
    double x1;
    double y1;
    double x2;
    double y2;
};

/// Symmetric-ordered second-moment matrix of (x1, y1, x2, y2).
struct CovarianceMatrix {
    Eigen::Matrix4d m;
};

/// Full 4x4 covariance matrix of the state described by a VariancePair:
/// all four diagonal entries equal (S+ + S-)/2, the x1x2 cross entries are
/// +(S+ - S-)/2 and the y1y2 cross entries -(S+ - S-)/2; every x-y moment
/// vanishes.
CovarianceMatrix covariance_from_variances(const VariancePair& v);

/// Inverse of covariance_from_variances on the two-parameter family.
/// Throws std::domain_error if the matrix is not of that form.
VariancePair variances_from_covariance(const CovarianceMatrix& cov);

/// Pointwise value of the two-mode Gaussian Wigner function with the given
/// combination variances. Normalized to unit integral over phase space;
/// strictly positive with its maximum at the origin.
double wigner_eval(const VariancePair& v, const PhasePoint& p);

}  // namespace twinbeam
