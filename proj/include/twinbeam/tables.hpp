#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twinbeam/channel.hpp"
#include "twinbeam/fock_oracle.hpp"
#include "twinbeam/gaussian.hpp"
#include "twinbeam/separability.hpp"

namespace twinbeam {

// Grid evaluation and report assembly shared by the command-line front end
// and the test suites. Everything here only forwards to the physics
// operations; no formulas live in this layer.

/// One row of a time scan of the evolved channel.
struct EvolveRow {
    double t;
    double tau;
    double sigma_plus_sq;
    double sigma_minus_sq;
    bool separable;
    double fidelity;
};

std::vector<EvolveRow> evolve_scan(const TwinBeamParams& tb, const ChannelParams& cp,
                                   const std::vector<double>& times, double eta);

/// Uniform, strictly increasing time grid with `steps` points.
std::vector<double> make_time_grid(double t_start, double t_stop, int steps);

/// Separability threshold (in units 1/Gamma) versus mean photon number,
/// one column per thermal occupation M.
struct Fig1Table {
    std::vector<double> m_values;
    std::vector<double> n_grid;
    /// thresholds[i][j] = Gamma * t_s at n_grid[i], m_values[j]
    std::vector<std::vector<double>> thresholds;
};

inline const std::vector<double> kFig1DefaultM = {0.1, 0.3, 0.7, 1.0};

std::vector<double> fig1_default_n_grid();  // 0 to 20 in steps of 0.1

Fig1Table fig1_table(const std::vector<double>& n_grid,
                     const std::vector<double>& m_values = kFig1DefaultM);

/// Closed form versus Fock-basis integration at one parameter point.
struct OraclePoint {
    double lambda;
    double m_thermal;
    double gamma_rate;
    double t;
    int dim;
    double step;
    VariancePair closed;
    VariancePair integrated;
    double diff_plus;
    double diff_minus;
    double pt_min_eigenvalue;
    bool variance_separable;
    bool near_boundary;    ///< |S-^2 - 1/4| <= 1e-3: sign agreement not meaningful
    bool pt_sign_agrees;   ///< always true when near_boundary
    bool within_tolerance;
};

inline constexpr double kOracleVarianceTolerance = 1e-5;
inline constexpr double kOracleBoundaryBand = 1e-3;

/// Runs the Fock-basis integration at one point and compares with the
/// closed form. dim <= 0 or step <= 0 pick the per-point defaults.
OraclePoint oracle_check_point(const TwinBeamParams& tb, const ChannelParams& cp,
                               double t, int dim = 0, double step = 0.0);

/// The standard cross-check grid:
/// lambda in {0.2, 0.4, 0.6} x M in {0.1, 0.5, 1.0} x Gamma t in {0.1, 0.5, 1.0}.
std::vector<OraclePoint> oracle_default_grid(double gamma_rate = 1.0, int dim = 0,
                                             double step = 0.0);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace twinbeam
