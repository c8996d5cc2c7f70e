#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "twinbeam/fock_oracle.hpp"
#include "twinbeam/separability.hpp"

using namespace twinbeam;

namespace {

Eigen::Index idx(int dim, int n1, int n2) {
    return static_cast<Eigen::Index>(n1) * dim + n2;
}

FockDensityMatrix fock_pair_state(int dim, int n1, int n2) {
    FockDensityMatrix rho;
    rho.dim = dim;
    rho.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim) * dim,
                                         static_cast<Eigen::Index>(dim) * dim);
    rho.entries(idx(dim, n1, n2), idx(dim, n1, n2)) = 1.0;
    return rho;
}

}  // namespace

TEST_CASE("twin beam in the Fock basis: vacuum") {
    const FockDensityMatrix rho = twin_beam_fock(twin_beam_from_lambda(0.0), 2);
    CHECK(rho.entries(0, 0) == std::complex<double>(1.0, 0.0));
    CHECK(rho.entries.cwiseAbs().sum() == 1.0);
    CHECK(rho.tail_mass == 0.0);
}

TEST_CASE("twin beam in the Fock basis: photon number and diagonal weights") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.5);
    const FockDensityMatrix rho = twin_beam_fock(tb, 20);
    const auto [n1, n2] = mean_photon_numbers(rho);
    CHECK(std::abs(n1 - 0.27154031740762189) < 1e-6);
    CHECK(std::abs(n2 - 0.27154031740762189) < 1e-6);

    // weights (1 - x^2) x^{2p} for p = 0, 1, 2 at x = tanh(0.5)
    const double w0 = rho.entries(idx(20, 0, 0), idx(20, 0, 0)).real();
    const double w1 = rho.entries(idx(20, 1, 1), idx(20, 1, 1)).real();
    const double w2 = rho.entries(idx(20, 2, 2), idx(20, 2, 2)).real();
    CHECK(w0 == doctest::Approx(0.78644773296592741).epsilon(1e-9));
    CHECK(w1 == doctest::Approx(0.16794769627868074).epsilon(1e-9));
    CHECK(w2 == doctest::Approx(0.035865611283462149).epsilon(1e-9));

    // pure state: rank one within rounding
    CHECK(std::abs((rho.entries * rho.entries).trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(rho.entries.trace().real() - 1.0) < 1e-14);
}

TEST_CASE("twin beam in the Fock basis: inadequate truncation names the needed dim") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.6);
    CHECK_THROWS_WITH_AS(twin_beam_fock(tb, 4),
                         doctest::Contains("raise dim to at least 15"), TruncationError);
    CHECK(minimal_twin_beam_dim(tb.x, 1e-8) == 15);
    CHECK_NOTHROW(twin_beam_fock(tb, 15));
}

TEST_CASE("master-equation increment: thermal product is stationary") {
    const double m = 0.5;
    const int dim = 18;
    const FockDensityMatrix stat = thermal_product_state(m, dim);
    const Eigen::MatrixXcd inc = lindblad_rhs(stat, ChannelParams{1.0, m});
    // residual limited by the truncated thermal tail, far below any dynamics
    CHECK(inc.cwiseAbs().maxCoeff() < 1e-7);
    CHECK(std::abs(inc.trace().real()) < 1e-14);
}

TEST_CASE("master-equation increment: vacuum is the zero-temperature fixed point") {
    const FockDensityMatrix vac = fock_pair_state(4, 0, 0);
    const Eigen::MatrixXcd inc = lindblad_rhs(vac, ChannelParams{1.0, 0.0});
    CHECK(inc.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("master-equation increment: single-photon decay rate") {
    // d<n1>/dt = -Gamma <n1> at M = 0: equals -1 on |1,1><1,1|
    const int dim = 6;
    const FockDensityMatrix rho = fock_pair_state(dim, 1, 1);
    const Eigen::MatrixXcd inc = lindblad_rhs(rho, ChannelParams{1.0, 0.0});
    double dn1 = 0.0;
    for (int p = 0; p < dim; ++p) {
        for (int q = 0; q < dim; ++q) {
            dn1 += p * inc(idx(dim, p, q), idx(dim, p, q)).real();
        }
    }
    CHECK(dn1 == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("master-equation increment is traceless and Hermiticity-preserving") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.4);
    const FockDensityMatrix rho = twin_beam_fock(tb, 12);
    const Eigen::MatrixXcd inc = lindblad_rhs(rho, ChannelParams{1.3, 0.8});
    CHECK(std::abs(inc.trace()) < 1e-12 * 144.0);
    CHECK((inc - inc.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("integrate: t = 0 returns the state unchanged") {
    const FockDensityMatrix rho0 = twin_beam_fock(twin_beam_from_lambda(0.3), 10);
    const IntegratorConfig cfg{0.01, 10};
    const FockDensityMatrix rho = integrate(rho0, ChannelParams{1.0, 0.5}, 0.0, cfg);
    CHECK((rho.entries - rho0.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("integrate matches the closed-form variances") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.4);
    const ChannelParams cp{1.0, 0.5};
    const double t = 0.5;
    IntegratorConfig cfg = default_integrator_config(tb, cp);
    cfg.dim = 16;
    IntegrationStats stats;
    const FockDensityMatrix rho = integrate(twin_beam_fock(tb, 16), cp, t, cfg, &stats);
    const VariancePair oracle = extract_variances(rho);
    const VariancePair closed = evolve(tb, cp, t).variances;
    CHECK(std::abs(oracle.var_plus - closed.var_plus) < 1e-6);
    CHECK(std::abs(oracle.var_minus - closed.var_minus) < 1e-6);

    CHECK(stats.max_trace_deviation < 1e-9);
    CHECK(stats.max_hermiticity_drift < 1e-10);
    CHECK(stats.min_diagonal > -1e-12);
    CHECK(max_selection_rule_violation(rho) < 1e-12);
}

TEST_CASE("integrate: long interaction thermalizes the state") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.4);
    const ChannelParams cp{1.0, 0.5};
    const IntegratorConfig cfg = default_integrator_config(tb, cp);
    const FockDensityMatrix rho = integrate(twin_beam_fock(tb, cfg.dim), cp, 20.0, cfg);
    const FockDensityMatrix thermal = thermal_product_state(0.5, cfg.dim);
    CHECK(state_fidelity(rho, thermal) > 1.0 - 1e-6);
}

TEST_CASE("integrate: config validation") {
    const FockDensityMatrix rho0 = twin_beam_fock(twin_beam_from_lambda(0.3), 10);
    const ChannelParams cp{1.0, 0.5};
    CHECK_THROWS_AS(integrate(rho0, cp, 0.5, IntegratorConfig{0.05, 10}),
                    std::domain_error);  // step * Gamma * (2M+1) = 0.1 > 0.05
    CHECK_THROWS_AS(integrate(rho0, cp, 0.5, IntegratorConfig{0.01, 12}),
                    std::domain_error);  // dim mismatch
    CHECK_THROWS_AS(integrate(rho0, cp, -1.0, IntegratorConfig{0.01, 10}),
                    std::domain_error);
}

TEST_CASE("integrate: observer sees a consistent trajectory") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.3);
    const ChannelParams cp{1.0, 0.5};
    IntegratorConfig cfg = default_integrator_config(tb, cp);
    int calls = 0;
    double last_t = 0.0;
    double last_sm = 0.0;
    integrate(twin_beam_fock(tb, cfg.dim), cp, 0.3, cfg, nullptr,
              [&](double t, const FockDensityMatrix& rho) {
                  ++calls;
                  CHECK(t > last_t);
                  last_t = t;
                  last_sm = extract_variances(rho).var_minus;
                  CHECK(std::abs(rho.entries.trace().real() - 1.0) < 1e-9);
              },
              5);
    CHECK(calls > 2);
    CHECK(last_t == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(last_sm - evolve(tb, cp, 0.3).variances.var_minus) < 1e-6);
}

TEST_CASE("extract variances: vacuum and pure twin beam") {
    const VariancePair vac = extract_variances(twin_beam_fock(twin_beam_from_lambda(0.0), 4));
    CHECK(vac.var_plus == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(vac.var_minus == doctest::Approx(0.25).epsilon(1e-14));

    const VariancePair tb = extract_variances(twin_beam_fock(twin_beam_from_lambda(0.5), 20));
    CHECK(std::abs(tb.var_plus - 0.67957045711476131) < 1e-6);
    CHECK(std::abs(tb.var_minus - 0.09196986029286058) < 1e-6);
}

TEST_CASE("extract variances rejects displaced states") {
    // mix |0> and |1> coherently in mode 1: nonzero <a>
    const int dim = 4;
    FockDensityMatrix rho;
    rho.dim = dim;
    rho.entries = Eigen::MatrixXcd::Zero(16, 16);
    rho.entries(idx(dim, 0, 0), idx(dim, 0, 0)) = 0.5;
    rho.entries(idx(dim, 1, 0), idx(dim, 1, 0)) = 0.5;
    rho.entries(idx(dim, 0, 0), idx(dim, 1, 0)) = 0.5;
    rho.entries(idx(dim, 1, 0), idx(dim, 0, 0)) = 0.5;
    CHECK_THROWS_AS(extract_variances(rho), std::domain_error);
}

TEST_CASE("partial transpose: product states stay positive, twin beams do not") {
    CHECK(partial_transpose_min_eigenvalue(thermal_product_state(0.7, 10)) > -1e-10);
    CHECK(partial_transpose_min_eigenvalue(
              twin_beam_fock(twin_beam_from_lambda(0.5), 16)) < -0.1);
}

TEST_CASE("partial transpose sign tracks the variance criterion across the threshold") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.5);
    const ChannelParams cp{1.0, 0.5};
    const double ts = threshold_time(tb, cp).value();
    const IntegratorConfig cfg = default_integrator_config(tb, cp);
    const FockDensityMatrix rho0 = twin_beam_fock(tb, cfg.dim);

    const FockDensityMatrix early = integrate(rho0, cp, 0.5 * ts, cfg);
    CHECK(partial_transpose_min_eigenvalue(early) < 0.0);
    CHECK_FALSE(variance_criterion(evolve(tb, cp, 0.5 * ts).variances).separable);

    const FockDensityMatrix late = integrate(rho0, cp, 1.5 * ts, cfg);
    CHECK(partial_transpose_min_eigenvalue(late) > -1e-10);
    CHECK(variance_criterion(evolve(tb, cp, 1.5 * ts).variances).separable);
}

TEST_CASE("legal steps are deeply converged under halving") {
    // The monitored moments obey slow closed equations, so the halving gate
    // only fires on an implementation defect; assert the margin is wide.
    const TwinBeamParams tb = twin_beam_from_lambda(0.6);
    const ChannelParams cp{1.0, 0.1};
    const int dim = 19;
    const FockDensityMatrix rho0 = twin_beam_fock(tb, dim);
    const IntegratorConfig coarse{0.05 / 1.2, dim, 1e-8, false};
    const IntegratorConfig fine{0.025 / 1.2, dim, 1e-8, false};
    const VariancePair a = extract_variances(integrate(rho0, cp, 1.0, coarse));
    const VariancePair b = extract_variances(integrate(rho0, cp, 1.0, fine));
    CHECK(std::abs(a.var_plus - b.var_plus) < 1e-7);
    CHECK(std::abs(a.var_minus - b.var_minus) < 1e-7);
}

TEST_CASE("state fidelity: identical, orthogonal and mixed cases") {
    const FockDensityMatrix a = twin_beam_fock(twin_beam_from_lambda(0.4), 12);
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-8));
    const FockDensityMatrix b = fock_pair_state(12, 3, 3);
    const FockDensityMatrix c = fock_pair_state(12, 2, 3);
    CHECK(state_fidelity(b, c) == doctest::Approx(0.0).epsilon(1e-12));
}
