#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "twinbeam/channel.hpp"
#include "twinbeam/gaussian.hpp"

namespace twinbeam {

/// Raised when the Fock-space truncation is too small for the requested
/// state or evolution. The message names the minimal adequate dimension.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the integrator cannot meet its accuracy targets (step-halving
/// instability or trace drift beyond tolerance).
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-mode density matrix in the truncated product Fock basis |n1 n2>,
/// n1, n2 < dim. Row/column index is n1 * dim + n2.
struct FockDensityMatrix {
    int dim = 0;
    Eigen::MatrixXcd entries;
    /// Weight of the untruncated initial state beyond the cutoff, before
    /// renormalization.
    double tail_mass = 0.0;
};

/// Smallest per-mode dimension for which the twin-beam tail x^{2 dim} does
/// not exceed the tolerance.
int minimal_twin_beam_dim(double x, double tail_tolerance);

/// Per-mode dimension used by the oracle runs: the minimal adequate value
/// plus a margin of 4 levels for thermal excitation picked up during the
/// evolution.
int recommended_fock_dim(const TwinBeamParams& tb, double tail_tolerance = 1e-8);

/// Truncated, renormalized twin-beam pure state
/// |psi> ~ sum_p x^p |p, p>, rho = |psi><psi|.
/// Throws TruncationError if the discarded weight x^{2 dim} exceeds
/// tail_tolerance, naming the minimal adequate dim.
FockDensityMatrix twin_beam_fock(const TwinBeamParams& tb, int dim,
                                 double tail_tolerance = 1e-8);

/// Truncated product of two single-mode thermal states with m_thermal mean
/// photons each (the stationary state of the channel), renormalized.
FockDensityMatrix thermal_product_state(double m_thermal, int dim);

/// Right-hand side of the two-mode master equation: damping at rate
/// Gamma (1 + M) and phase-insensitive amplification at rate Gamma M on
/// each mode, with the trace-preserving dissipator
/// L[O] rho = O rho O^dag - (O^dag O rho + rho O^dag O) / 2.
/// The returned increment is traceless and Hermiticity-preserving.
Eigen::MatrixXcd lindblad_rhs(const FockDensityMatrix& rho, const ChannelParams& cp);

/// Fixed-step RK4 integrator configuration. The step must satisfy
/// step * Gamma * (2M + 1) <= 0.05 (accuracy/stability heuristic for the
/// slowest relevant relaxation scale).
struct IntegratorConfig {
    double step;
    int dim;
    double tail_tolerance = 1e-8;
    /// Integrate a second time with half the step and require every
    /// extracted moment to move by less than 1e-6; AccuracyError otherwise.
    bool check_step_halving = true;
};

/// Per-mode default: step small against both the channel relaxation rate
/// and the fastest truncated-level decay rate, dim with the standard margin.
IntegratorConfig default_integrator_config(const TwinBeamParams& tb, const ChannelParams& cp);

/// Diagnostics recorded along an integration run.
struct IntegrationStats {
    double max_hermiticity_drift = 0.0;  ///< largest |rho - rho^dag|/2 entry before symmetrization
    double max_trace_deviation = 0.0;    ///< largest |tr rho - 1|
    double min_diagonal = 0.0;           ///< smallest diagonal entry seen
    int steps = 0;
};

/// Observer called after selected steps with the current time and state.
using StepObserver = std::function<void(double t, const FockDensityMatrix& rho)>;

/// Integrates the master equation for a time t with classical RK4.
/// Each step re-symmetrizes the state (the pre-correction deviation is
/// recorded), checks trace preservation to 1e-9 and aborts with
/// TruncationError if the top two Fock levels of either mode accumulate
/// more than 1e-6 population.
FockDensityMatrix integrate(const FockDensityMatrix& rho0, const ChannelParams& cp,
                            double t, const IntegratorConfig& cfg,
                            IntegrationStats* stats = nullptr,
                            const StepObserver& observer = {},
                            int observer_stride = 1);

/// Mean photon numbers (<n1>, <n2>) of the state.
std::pair<double, double> mean_photon_numbers(const FockDensityMatrix& rho);

/// Combination variances (Var(x1+x2)/2, Var(x1-x2)/2) from symmetric-ordered
/// ladder-operator moments. Requires a zero-mean state
/// (|<a>|, |<b>| <= 1e-10); throws std::domain_error otherwise.
VariancePair extract_variances(const FockDensityMatrix& rho);

/// Minimum eigenvalue of the partial transpose (mode-2 indices swapped).
/// Negative witnesses entanglement; for Gaussian states nonnegative implies
/// separability.
double partial_transpose_min_eigenvalue(const FockDensityMatrix& rho);

/// Uhlmann fidelity of two density matrices, (tr sqrt(sqrt(a) b sqrt(a)))^2.
double state_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b);

/// Largest |rho_{(n1 n2),(m1 m2)}| over entries with n1 - m1 != n2 - m2.
/// The channel preserves the twin-beam coherence pattern, so this stays at
/// rounding level throughout an evolution; growth flags an integration bug.
double max_selection_rule_violation(const FockDensityMatrix& rho);

}  // namespace twinbeam
