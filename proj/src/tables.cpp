#include "twinbeam/tables.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "twinbeam/teleportation.hpp"

namespace twinbeam {

std::vector<double> make_time_grid(double t_start, double t_stop, int steps) {
    if (!std::isfinite(t_start) || !std::isfinite(t_stop) || t_start < 0.0 ||
        t_stop <= t_start || steps < 2) {
        throw std::domain_error("time grid needs 0 <= t_start < t_stop and steps >= 2");
    }
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        grid[static_cast<std::size_t>(i)] =
            t_start + (t_stop - t_start) * static_cast<double>(i) / (steps - 1);
    }
    return grid;
}

std::vector<EvolveRow> evolve_scan(const TwinBeamParams& tb, const ChannelParams& cp,
                                   const std::vector<double>& times, double eta) {
    std::vector<EvolveRow> rows;
    rows.reserve(times.size());
    for (double t : times) {
        const EvolutionResult r = evolve(tb, cp, t);
        const SeparabilityVerdict verdict = variance_criterion(r.variances);
        const double f = fidelity(tb, cp, t, TeleportationParams{eta});
        rows.push_back(EvolveRow{r.time, r.tau, r.variances.var_plus,
                                 r.variances.var_minus, verdict.separable, f});
    }
    return rows;
}

std::vector<double> fig1_default_n_grid() {
    std::vector<double> grid(201);
    for (int i = 0; i <= 200; ++i) {
        grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / 10.0;
    }
    return grid;
}

Fig1Table fig1_table(const std::vector<double>& n_grid, const std::vector<double>& m_values) {
    Fig1Table table;
    table.m_values = m_values;
    table.n_grid = n_grid;
    table.thresholds.reserve(n_grid.size());
    // Reported in units of 1/Gamma, so the rate drops out.
    const double unit_rate = 1.0;
    for (double n : n_grid) {
        const TwinBeamParams tb = twin_beam_from_photon_number(n);
        std::vector<double> row;
        row.reserve(m_values.size());
        for (double m : m_values) {
            const auto ts = threshold_time(tb, ChannelParams{unit_rate, m});
            if (!ts) {
                throw std::domain_error("threshold table requires M > 0");
            }
            row.push_back(*ts);
        }
        table.thresholds.push_back(std::move(row));
    }
    return table;
}

OraclePoint oracle_check_point(const TwinBeamParams& tb, const ChannelParams& cp,
                               double t, int dim, double step) {
    IntegratorConfig cfg = default_integrator_config(tb, cp);
    if (dim > 0) {
        cfg.dim = dim;
    }
    if (step > 0.0) {
        cfg.step = step;
    }

    OraclePoint point;
    point.lambda = tb.lambda;
    point.m_thermal = cp.m_thermal;
    point.gamma_rate = cp.gamma_rate;
    point.t = t;
    point.dim = cfg.dim;
    point.step = cfg.step;
    point.closed = evolve(tb, cp, t).variances;

    const FockDensityMatrix rho0 = twin_beam_fock(tb, cfg.dim, cfg.tail_tolerance);
    const FockDensityMatrix rho = integrate(rho0, cp, t, cfg);
    point.integrated = extract_variances(rho);
    point.diff_plus = std::abs(point.integrated.var_plus - point.closed.var_plus);
    point.diff_minus = std::abs(point.integrated.var_minus - point.closed.var_minus);
    point.pt_min_eigenvalue = partial_transpose_min_eigenvalue(rho);
    point.variance_separable = variance_criterion(point.closed).separable;
    point.near_boundary = std::abs(point.closed.var_minus - 0.25) <= kOracleBoundaryBand;
    point.pt_sign_agrees =
        point.near_boundary ||
        (point.variance_separable ? point.pt_min_eigenvalue >= -1e-10
                                  : point.pt_min_eigenvalue < 0.0);
    point.within_tolerance = point.diff_plus < kOracleVarianceTolerance &&
                             point.diff_minus < kOracleVarianceTolerance &&
                             point.pt_sign_agrees;
    return point;
}

std::vector<OraclePoint> oracle_default_grid(double gamma_rate, int dim, double step) {
    const double lambdas[] = {0.2, 0.4, 0.6};
    const double thermals[] = {0.1, 0.5, 1.0};
    const double gamma_ts[] = {0.1, 0.5, 1.0};
    std::vector<OraclePoint> points;
    points.reserve(27);
    for (double lambda : lambdas) {
        const TwinBeamParams tb = twin_beam_from_lambda(lambda);
        for (double m : thermals) {
            const ChannelParams cp{gamma_rate, m};
            for (double gt : gamma_ts) {
                points.push_back(oracle_check_point(tb, cp, gt / gamma_rate, dim, step));
            }
        }
    }
    return points;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

}  // namespace twinbeam
