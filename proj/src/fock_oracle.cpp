#include "twinbeam/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace twinbeam {

namespace {

using Complex = std::complex<double>;

void check_state(const FockDensityMatrix& rho) {
    if (rho.dim < 2) {
        throw std::domain_error("Fock truncation must be at least 2 levels per mode");
    }
    const auto n = static_cast<Eigen::Index>(rho.dim) * rho.dim;
    if (rho.entries.rows() != n || rho.entries.cols() != n) {
        throw std::domain_error("density matrix size does not match dim^2");
    }
}

std::vector<double> sqrt_table(int dim) {
    std::vector<double> sq(static_cast<std::size_t>(dim) + 1);
    for (int k = 0; k <= dim; ++k) {
        sq[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(k));
    }
    return sq;
}

// Master-equation right-hand side, written entrywise. For the basis element
// |n1 n2><m1 m2| the damping and amplification terms only couple states with
// both mode indices shifted together, which keeps the coefficients real and
// the map Hermiticity-preserving by construction.
//
// The amplification dissipator is built from the projected creation operator
// P a^dag P: the jump out of the top level is cut off, so its anticommutator
// must not count it either. With that cap the truncated generator is again
// of Lindblad form on the cut space and preserves the trace exactly.
void rhs_into(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, int d,
              double rate_down, double rate_up, const std::vector<double>& sq) {
    auto capped = [d](int k) { return (k + 1 < d) ? static_cast<double>(k + 1) : 0.0; };
    for (int m1 = 0; m1 < d; ++m1) {
        for (int m2 = 0; m2 < d; ++m2) {
            const Eigen::Index c = static_cast<Eigen::Index>(m1) * d + m2;
            for (int n1 = 0; n1 < d; ++n1) {
                for (int n2 = 0; n2 < d; ++n2) {
                    const Eigen::Index r = static_cast<Eigen::Index>(n1) * d + n2;
                    Complex acc(0.0, 0.0);
                    // a rho a^dag and b rho b^dag
                    if (n1 + 1 < d && m1 + 1 < d) {
                        acc += rate_down * sq[n1 + 1] * sq[m1 + 1] * rho(r + d, c + d);
                    }
                    if (n2 + 1 < d && m2 + 1 < d) {
                        acc += rate_down * sq[n2 + 1] * sq[m2 + 1] * rho(r + 1, c + 1);
                    }
                    // a^dag rho a and b^dag rho b
                    if (n1 > 0 && m1 > 0) {
                        acc += rate_up * sq[n1] * sq[m1] * rho(r - d, c - d);
                    }
                    if (n2 > 0 && m2 > 0) {
                        acc += rate_up * sq[n2] * sq[m2] * rho(r - 1, c - 1);
                    }
                    // anticommutator parts of both dissipators
                    const double decay =
                        0.5 * rate_down * static_cast<double>(n1 + m1 + n2 + m2) +
                        0.5 * rate_up *
                            (capped(n1) + capped(m1) + capped(n2) + capped(m2));
                    out(r, c) = acc - decay * rho(r, c);
                }
            }
        }
    }
}

struct StepChecks {
    IntegrationStats* stats;
    int dim;
};

// Symmetrize, then enforce the trace and truncation guards. Returns the
// largest Hermiticity deviation that was corrected.
void apply_step_guards(Eigen::MatrixXcd& rho, const StepChecks& chk) {
    const Eigen::Index n = rho.rows();
    double drift = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            drift = std::max(drift, 0.5 * std::abs(rho(i, j) - std::conj(rho(j, i))));
        }
    }
    rho = (0.5 * (rho + rho.adjoint())).eval();

    const double trace_dev = std::abs(rho.trace().real() - 1.0);
    double min_diag = rho(0, 0).real();
    double top_mass = 0.0;
    const int d = chk.dim;
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            const double p = rho(static_cast<Eigen::Index>(n1) * d + n2,
                                 static_cast<Eigen::Index>(n1) * d + n2)
                                 .real();
            min_diag = std::min(min_diag, p);
            if (n1 >= d - 2 || n2 >= d - 2) {
                top_mass += p;
            }
        }
    }
    if (chk.stats) {
        chk.stats->max_hermiticity_drift = std::max(chk.stats->max_hermiticity_drift, drift);
        chk.stats->max_trace_deviation = std::max(chk.stats->max_trace_deviation, trace_dev);
        chk.stats->min_diagonal = std::min(chk.stats->min_diagonal, min_diag);
    }
    if (trace_dev > 1e-9) {
        throw AccuracyError("integration lost trace preservation beyond 1e-9");
    }
    if (top_mass > 1e-6) {
        std::ostringstream msg;
        msg << "population " << top_mass << " reached the top two Fock levels; raise dim above "
            << d;
        throw TruncationError(msg.str());
    }
}

FockDensityMatrix run_rk4(const FockDensityMatrix& rho0, const ChannelParams& cp,
                          double t, double step, IntegrationStats* stats,
                          const StepObserver& observer, int observer_stride) {
    const int d = rho0.dim;
    const double rate_down = cp.gamma_rate * (1.0 + cp.m_thermal);
    const double rate_up = cp.gamma_rate * cp.m_thermal;
    const std::vector<double> sq = sqrt_table(d);

    const int n_steps = std::max(1, static_cast<int>(std::ceil(t / step - 1e-12)));
    const double h = t / n_steps;

    FockDensityMatrix state = rho0;
    const Eigen::Index n = state.entries.rows();
    Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    StepChecks chk{stats, d};
    if (stats) {
        stats->steps = n_steps;
        stats->min_diagonal = state.entries.diagonal().real().minCoeff();
    }

    for (int s = 0; s < n_steps; ++s) {
        rhs_into(state.entries, k1, d, rate_down, rate_up, sq);
        tmp = state.entries + (0.5 * h) * k1;
        rhs_into(tmp, k2, d, rate_down, rate_up, sq);
        tmp = state.entries + (0.5 * h) * k2;
        rhs_into(tmp, k3, d, rate_down, rate_up, sq);
        tmp = state.entries + h * k3;
        rhs_into(tmp, k4, d, rate_down, rate_up, sq);
        state.entries += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        apply_step_guards(state.entries, chk);
        if (observer && ((s + 1) % observer_stride == 0 || s + 1 == n_steps)) {
            observer(h * (s + 1), state);
        }
    }
    return state;
}

struct LadderMoments {
    Complex a_mean{0.0, 0.0};
    Complex b_mean{0.0, 0.0};
    Complex a_sq{0.0, 0.0};
    Complex b_sq{0.0, 0.0};
    Complex ab{0.0, 0.0};
    Complex ab_dag{0.0, 0.0};
    double n1 = 0.0;
    double n2 = 0.0;
};

LadderMoments ladder_moments(const FockDensityMatrix& rho) {
    const int d = rho.dim;
    const std::vector<double> sq = sqrt_table(d + 2);
    LadderMoments m;
    auto idx = [d](int p, int q) { return static_cast<Eigen::Index>(p) * d + q; };
    for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
            const Eigen::Index col = idx(p, q);
            m.n1 += p * rho.entries(col, col).real();
            m.n2 += q * rho.entries(col, col).real();
            if (p + 1 < d) {
                m.a_mean += sq[p + 1] * rho.entries(idx(p + 1, q), col);
            }
            if (q + 1 < d) {
                m.b_mean += sq[q + 1] * rho.entries(idx(p, q + 1), col);
            }
            if (p + 2 < d) {
                m.a_sq += sq[p + 1] * sq[p + 2] * rho.entries(idx(p + 2, q), col);
            }
            if (q + 2 < d) {
                m.b_sq += sq[q + 1] * sq[q + 2] * rho.entries(idx(p, q + 2), col);
            }
            if (p + 1 < d && q + 1 < d) {
                m.ab += sq[p + 1] * sq[q + 1] * rho.entries(idx(p + 1, q + 1), col);
            }
            if (p + 1 < d && q > 0) {
                m.ab_dag += sq[p + 1] * sq[q] * rho.entries(idx(p + 1, q - 1), col);
            }
        }
    }
    return m;
}

}  // namespace

int minimal_twin_beam_dim(double x, double tail_tolerance) {
    if (!(tail_tolerance > 0.0) || !std::isfinite(tail_tolerance)) {
        throw std::domain_error("tail tolerance must be positive");
    }
    if (x <= 0.0) {
        return 2;
    }
    int d = std::max(2, static_cast<int>(std::ceil(std::log(tail_tolerance) /
                                                   (2.0 * std::log(x)))));
    while (std::pow(x, 2 * d) > tail_tolerance) {
        ++d;
    }
    while (d > 2 && std::pow(x, 2 * (d - 1)) <= tail_tolerance) {
        --d;
    }
    return d;
}

int recommended_fock_dim(const TwinBeamParams& tb, double tail_tolerance) {
    return minimal_twin_beam_dim(tb.x, tail_tolerance) + 4;
}

FockDensityMatrix twin_beam_fock(const TwinBeamParams& tb, int dim, double tail_tolerance) {
    if (!std::isfinite(tb.lambda) || tb.lambda < 0.0 || tb.x < 0.0 || tb.x >= 1.0) {
        throw std::domain_error("invalid twin-beam parameters");
    }
    if (dim < 2) {
        throw std::domain_error("Fock truncation must be at least 2 levels per mode");
    }
    const double tail = std::pow(tb.x, 2 * dim);
    if (tail > tail_tolerance) {
        std::ostringstream msg;
        msg << "truncated twin-beam tail mass " << tail << " exceeds " << tail_tolerance
            << "; raise dim to at least " << minimal_twin_beam_dim(tb.x, tail_tolerance);
        throw TruncationError(msg.str());
    }

    FockDensityMatrix rho;
    rho.dim = dim;
    rho.tail_mass = tail;
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    rho.entries = Eigen::MatrixXcd::Zero(n, n);

    std::vector<double> amp(static_cast<std::size_t>(dim));
    const double norm = std::sqrt((1.0 - tb.x * tb.x) / (1.0 - tail));
    for (int p = 0; p < dim; ++p) {
        amp[static_cast<std::size_t>(p)] = norm * std::pow(tb.x, p);
    }
    for (int p = 0; p < dim; ++p) {
        for (int q = 0; q < dim; ++q) {
            rho.entries(static_cast<Eigen::Index>(p) * dim + p,
                        static_cast<Eigen::Index>(q) * dim + q) =
                amp[static_cast<std::size_t>(p)] * amp[static_cast<std::size_t>(q)];
        }
    }
    return rho;
}

FockDensityMatrix thermal_product_state(double m_thermal, int dim) {
    if (!std::isfinite(m_thermal) || m_thermal < 0.0) {
        throw std::domain_error("thermal photon number must be finite and >= 0");
    }
    if (dim < 2) {
        throw std::domain_error("Fock truncation must be at least 2 levels per mode");
    }
    const double q = m_thermal / (1.0 + m_thermal);
    std::vector<double> p(static_cast<std::size_t>(dim));
    double total = 0.0;
    for (int k = 0; k < dim; ++k) {
        p[static_cast<std::size_t>(k)] = std::pow(q, k);
        total += p[static_cast<std::size_t>(k)];
    }
    for (double& w : p) {
        w /= total;
    }

    FockDensityMatrix rho;
    rho.dim = dim;
    rho.tail_mass = (q > 0.0) ? std::pow(q, dim) : 0.0;
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    rho.entries = Eigen::MatrixXcd::Zero(n, n);
    for (int n1 = 0; n1 < dim; ++n1) {
        for (int n2 = 0; n2 < dim; ++n2) {
            const Eigen::Index r = static_cast<Eigen::Index>(n1) * dim + n2;
            rho.entries(r, r) = p[static_cast<std::size_t>(n1)] * p[static_cast<std::size_t>(n2)];
        }
    }
    return rho;
}

Eigen::MatrixXcd lindblad_rhs(const FockDensityMatrix& rho, const ChannelParams& cp) {
    check_state(rho);
    drift_coefficient(cp);  // validates the channel parameters
    const double rate_down = cp.gamma_rate * (1.0 + cp.m_thermal);
    const double rate_up = cp.gamma_rate * cp.m_thermal;
    Eigen::MatrixXcd out(rho.entries.rows(), rho.entries.cols());
    rhs_into(rho.entries, out, rho.dim, rate_down, rate_up, sqrt_table(rho.dim));
    return out;
}

IntegratorConfig default_integrator_config(const TwinBeamParams& tb, const ChannelParams& cp) {
    drift_coefficient(cp);
    // The flat margin of recommended_fock_dim covers weak reservoirs only;
    // a hot one (M ~ 1) pushes enough population upward during the evolution
    // to trip the top-level guard, so allow ~3 extra levels per thermal photon.
    const int dim =
        recommended_fock_dim(tb) + static_cast<int>(std::ceil(3.0 * cp.m_thermal));
    // Two scales matter: the channel relaxation Gamma (2M + 1) and the decay
    // of the fastest truncated coherence, roughly Gamma (1 + 2M) dim.
    const double relax = 0.05 / (cp.gamma_rate * (2.0 * cp.m_thermal + 1.0));
    const double top = 0.4 / (cp.gamma_rate * (1.0 + 2.0 * cp.m_thermal) * dim);
    return IntegratorConfig{std::min(relax, top), dim};
}

FockDensityMatrix integrate(const FockDensityMatrix& rho0, const ChannelParams& cp,
                            double t, const IntegratorConfig& cfg,
                            IntegrationStats* stats, const StepObserver& observer,
                            int observer_stride) {
    check_state(rho0);
    drift_coefficient(cp);
    if (!std::isfinite(t) || t < 0.0) {
        throw std::domain_error("integration time must be finite and >= 0");
    }
    if (cfg.dim != rho0.dim) {
        throw std::domain_error("integrator config dim does not match the state");
    }
    if (!std::isfinite(cfg.step) || cfg.step <= 0.0) {
        throw std::domain_error("integrator step must be finite and > 0");
    }
    if (cfg.step * cp.gamma_rate * (2.0 * cp.m_thermal + 1.0) > 0.05 * (1.0 + 1e-12)) {
        throw std::domain_error("step too large: require step * Gamma * (2M+1) <= 0.05");
    }
    if (observer_stride < 1) {
        throw std::domain_error("observer stride must be >= 1");
    }
    if (stats) {
        *stats = IntegrationStats{};
        stats->min_diagonal = rho0.entries.diagonal().real().minCoeff();
    }
    if (t == 0.0) {
        return rho0;
    }
    if (!cfg.check_step_halving) {
        return run_rk4(rho0, cp, t, cfg.step, stats, observer, observer_stride);
    }

    FockDensityMatrix fine = run_rk4(rho0, cp, t, 0.5 * cfg.step, stats, observer,
                                     observer_stride);
    FockDensityMatrix coarse = run_rk4(rho0, cp, t, cfg.step, nullptr, {}, 1);
    const VariancePair vf = extract_variances(fine);
    const VariancePair vc = extract_variances(coarse);
    const auto [nf1, nf2] = mean_photon_numbers(fine);
    const auto [nc1, nc2] = mean_photon_numbers(coarse);
    const double worst = std::max({std::abs(vf.var_plus - vc.var_plus),
                                   std::abs(vf.var_minus - vc.var_minus),
                                   std::abs(nf1 - nc1), std::abs(nf2 - nc2)});
    if (worst > 1e-6) {
        std::ostringstream msg;
        msg << "step-halving instability: extracted moments moved by " << worst
            << " (> 1e-6); reduce the step";
        throw AccuracyError(msg.str());
    }
    return fine;
}

std::pair<double, double> mean_photon_numbers(const FockDensityMatrix& rho) {
    check_state(rho);
    double n1 = 0.0;
    double n2 = 0.0;
    for (int p = 0; p < rho.dim; ++p) {
        for (int q = 0; q < rho.dim; ++q) {
            const Eigen::Index r = static_cast<Eigen::Index>(p) * rho.dim + q;
            const double w = rho.entries(r, r).real();
            n1 += p * w;
            n2 += q * w;
        }
    }
    return {n1, n2};
}

VariancePair extract_variances(const FockDensityMatrix& rho) {
    check_state(rho);
    const LadderMoments m = ladder_moments(rho);
    if (std::abs(m.a_mean) > 1e-10 || std::abs(m.b_mean) > 1e-10) {
        throw std::domain_error("variance extraction requires a zero-mean state");
    }
    // Symmetric-ordered quadrature moments via x = (a + a^dag)/2.
    const double x1_sq = 0.25 * (2.0 * m.a_sq.real() + 2.0 * m.n1 + 1.0);
    const double x2_sq = 0.25 * (2.0 * m.b_sq.real() + 2.0 * m.n2 + 1.0);
    const double x1_x2 = 0.5 * (m.ab.real() + m.ab_dag.real());
    return VariancePair{0.5 * (x1_sq + x2_sq + 2.0 * x1_x2),
                        0.5 * (x1_sq + x2_sq - 2.0 * x1_x2)};
}

double partial_transpose_min_eigenvalue(const FockDensityMatrix& rho) {
    check_state(rho);
    const int d = rho.dim;
    const Eigen::Index n = rho.entries.rows();
    Eigen::MatrixXcd pt(n, n);
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            for (int m1 = 0; m1 < d; ++m1) {
                for (int m2 = 0; m2 < d; ++m2) {
                    pt(static_cast<Eigen::Index>(n1) * d + n2,
                       static_cast<Eigen::Index>(m1) * d + m2) =
                        rho.entries(static_cast<Eigen::Index>(n1) * d + m2,
                                    static_cast<Eigen::Index>(m1) * d + n2);
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double state_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    check_state(a);
    check_state(b);
    if (a.dim != b.dim) {
        throw std::domain_error("states must share the same truncation");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.entries);
    Eigen::VectorXd va = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sqrt_a =
        ea.eigenvectors() * va.asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::MatrixXcd inner = sqrt_a * b.entries * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ei(inner, Eigen::EigenvaluesOnly);
    const double trace_sqrt = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return trace_sqrt * trace_sqrt;
}

double max_selection_rule_violation(const FockDensityMatrix& rho) {
    check_state(rho);
    const int d = rho.dim;
    double worst = 0.0;
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            for (int m1 = 0; m1 < d; ++m1) {
                for (int m2 = 0; m2 < d; ++m2) {
                    if (n1 - m1 != n2 - m2) {
                        worst = std::max(
                            worst, std::abs(rho.entries(
                                       static_cast<Eigen::Index>(n1) * d + n2,
                                       static_cast<Eigen::Index>(m1) * d + m2)));
                    }
                }
            }
        }
    }
    return worst;
}

}  // namespace twinbeam
