// Command-line front end: parses flags, calls the library, formats tables.
// All numbers printed here come out of library calls; no physics lives in
// this file.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "twinbeam/channel.hpp"
#include "twinbeam/fock_oracle.hpp"
#include "twinbeam/gaussian.hpp"
#include "twinbeam/separability.hpp"
#include "twinbeam/tables.hpp"
#include "twinbeam/teleportation.hpp"

namespace {

using nlohmann::ordered_json;
using namespace twinbeam;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInfiniteThreshold = 3;

struct CommonOpts {
    std::optional<double> lambda;
    std::optional<double> n_mean;
    double gamma_rate = 1.0;
    double thermal_m = 0.5;
    double eta = 1.0;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = 12345;  // reserved for Monte-Carlo estimators
};

void add_twin_beam_flags(CLI::App* cmd, CommonOpts& opts) {
    auto* lam = cmd->add_option("--lambda", opts.lambda, "Twin-beam squeezing parameter");
    auto* nm = cmd->add_option("--n-mean", opts.n_mean, "Twin-beam mean photon number");
    lam->excludes(nm);
    nm->excludes(lam);
}

void add_channel_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--gamma-rate", opts.gamma_rate, "Damping rate Gamma (1/time)")
        ->capture_default_str();
    cmd->add_option("--thermal-m", opts.thermal_m, "Reservoir thermal photon number M")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "Write output to PATH instead of stdout");
    cmd->add_option("--seed", opts.seed, "RNG seed for Monte-Carlo estimators")
        ->capture_default_str();
}

TwinBeamParams resolve_twin_beam(const CommonOpts& opts) {
    if (opts.lambda.has_value() == opts.n_mean.has_value()) {
        throw CLI::ValidationError("exactly one of --lambda or --n-mean is required");
    }
    return opts.lambda ? twin_beam_from_lambda(*opts.lambda)
                       : twin_beam_from_photon_number(*opts.n_mean);
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file: " + opts.out_path);
    }
    file << text;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---- evolve ----------------------------------------------------------------

struct EvolveArgs {
    CommonOpts common;
    std::optional<double> t;
    std::optional<double> t_start;
    std::optional<double> t_stop;
    int t_steps = 0;
};

std::vector<double> resolve_times(const EvolveArgs& args) {
    const bool has_grid = args.t_start || args.t_stop || args.t_steps > 0;
    if (args.t && has_grid) {
        throw CLI::ValidationError("--t conflicts with --t-start/--t-stop/--t-steps");
    }
    if (args.t) {
        return {*args.t};
    }
    if (!args.t_start || !args.t_stop || args.t_steps < 2) {
        throw CLI::ValidationError(
            "need --t, or all of --t-start/--t-stop/--t-steps (steps >= 2)");
    }
    return make_time_grid(*args.t_start, *args.t_stop, args.t_steps);
}

int run_evolve(const EvolveArgs& args) {
    const TwinBeamParams tb = resolve_twin_beam(args.common);
    const ChannelParams cp{args.common.gamma_rate, args.common.thermal_m};
    const std::vector<double> times = resolve_times(args);
    const std::vector<EvolveRow> rows = evolve_scan(tb, cp, times, args.common.eta);

    std::ostringstream os;
    if (args.common.format == "csv") {
        os << "t,tau,sigma_plus_sq,sigma_minus_sq,separable,fidelity\n";
        for (const EvolveRow& r : rows) {
            os << format_double(r.t) << ',' << format_double(r.tau) << ','
               << format_double(r.sigma_plus_sq) << ',' << format_double(r.sigma_minus_sq)
               << ',' << bool_str(r.separable) << ',' << format_double(r.fidelity) << '\n';
        }
    } else {
        ordered_json doc;
        doc["command"] = "evolve";
        doc["params"] = {{"lambda", tb.lambda},
                         {"n_mean", tb.n_mean},
                         {"gamma_rate", cp.gamma_rate},
                         {"thermal_m", cp.m_thermal},
                         {"eta", args.common.eta}};
        doc["rows"] = ordered_json::array();
        for (const EvolveRow& r : rows) {
            doc["rows"].push_back({{"t", r.t},
                                   {"tau", r.tau},
                                   {"sigma_plus_sq", r.sigma_plus_sq},
                                   {"sigma_minus_sq", r.sigma_minus_sq},
                                   {"separable", r.separable},
                                   {"fidelity", r.fidelity}});
        }
        os << doc.dump(2) << '\n';
    }
    emit(args.common, os.str());
    return kExitOk;
}

// ---- threshold -------------------------------------------------------------

int run_threshold(const CommonOpts& opts) {
    const TwinBeamParams tb = resolve_twin_beam(opts);
    const ChannelParams cp{opts.gamma_rate, opts.thermal_m};
    const std::optional<double> ts = threshold_time(tb, cp);
    const std::optional<double> taus = threshold_tau(tb, cp);

    std::ostringstream os;
    if (opts.format == "csv") {
        os << "t_s,tau_s\n";
        os << (ts ? format_double(*ts) : "inf") << ','
           << (taus ? format_double(*taus) : "inf") << '\n';
    } else {
        ordered_json doc;
        doc["command"] = "threshold";
        doc["params"] = {{"lambda", tb.lambda},
                         {"n_mean", tb.n_mean},
                         {"gamma_rate", cp.gamma_rate},
                         {"thermal_m", cp.m_thermal}};
        doc["t_s"] = ts ? ordered_json(*ts) : ordered_json(nullptr);
        doc["tau_s"] = taus ? ordered_json(*taus) : ordered_json(nullptr);
        doc["infinite"] = !ts.has_value();
        os << doc.dump(2) << '\n';
    }
    emit(opts, os.str());
    if (!ts) {
        std::cerr << "threshold: never separable (M = 0, pure loss)\n";
        return kExitInfiniteThreshold;
    }
    std::cerr << "threshold: t_s = " << format_double(*ts)
              << "  tau_s = " << format_double(*taus) << '\n';
    return kExitOk;
}

// ---- fidelity --------------------------------------------------------------

int run_fidelity(const CommonOpts& opts, double t) {
    const TwinBeamParams tb = resolve_twin_beam(opts);
    const ChannelParams cp{opts.gamma_rate, opts.thermal_m};
    const double f = fidelity(tb, cp, t, TeleportationParams{opts.eta});
    const bool quantum = quantum_teleportation_possible(tb, cp, t);

    std::ostringstream os;
    if (opts.format == "csv") {
        os << "fidelity,quantum\n" << format_double(f) << ',' << bool_str(quantum) << '\n';
    } else {
        ordered_json doc;
        doc["command"] = "fidelity";
        doc["params"] = {{"lambda", tb.lambda},
                         {"n_mean", tb.n_mean},
                         {"gamma_rate", cp.gamma_rate},
                         {"thermal_m", cp.m_thermal},
                         {"t", t},
                         {"eta", opts.eta}};
        doc["fidelity"] = f;
        doc["quantum"] = quantum;
        os << doc.dump(2) << '\n';
    }
    emit(opts, os.str());
    return kExitOk;
}

// ---- fig1 ------------------------------------------------------------------

int run_fig1(const CommonOpts& opts) {
    const Fig1Table table = fig1_table(fig1_default_n_grid());

    std::ostringstream os;
    if (opts.format == "csv") {
        os << "N";
        for (double m : table.m_values) {
            os << ",ts_M" << format_double(m);
        }
        os << '\n';
        for (std::size_t i = 0; i < table.n_grid.size(); ++i) {
            os << format_double(table.n_grid[i]);
            for (double ts : table.thresholds[i]) {
                os << ',' << format_double(ts);
            }
            os << '\n';
        }
    } else {
        ordered_json doc;
        doc["command"] = "fig1";
        doc["m_values"] = table.m_values;
        doc["rows"] = ordered_json::array();
        for (std::size_t i = 0; i < table.n_grid.size(); ++i) {
            ordered_json row;
            row["N"] = table.n_grid[i];
            for (std::size_t j = 0; j < table.m_values.size(); ++j) {
                row["ts_M" + format_double(table.m_values[j])] = table.thresholds[i][j];
            }
            doc["rows"].push_back(std::move(row));
        }
        os << doc.dump(2) << '\n';
    }
    emit(opts, os.str());
    return kExitOk;
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
    CommonOpts common;
    std::optional<double> t;
    int dim = 0;
    double step = 0.0;
    std::string dump_path;  // optional moment time-series CSV
};

void append_oracle_csv(std::ostringstream& os, const OraclePoint& p) {
    os << format_double(p.lambda) << ',' << format_double(p.m_thermal) << ','
       << format_double(p.gamma_rate) << ',' << format_double(p.t) << ',' << p.dim << ','
       << format_double(p.step) << ',' << format_double(p.closed.var_plus) << ','
       << format_double(p.integrated.var_plus) << ',' << format_double(p.diff_plus) << ','
       << format_double(p.closed.var_minus) << ',' << format_double(p.integrated.var_minus)
       << ',' << format_double(p.diff_minus) << ',' << format_double(p.pt_min_eigenvalue)
       << ',' << bool_str(p.variance_separable) << ',' << bool_str(p.pt_sign_agrees) << ','
       << bool_str(p.within_tolerance) << '\n';
}

ordered_json oracle_point_json(const OraclePoint& p) {
    return {{"lambda", p.lambda},
            {"thermal_m", p.m_thermal},
            {"gamma_rate", p.gamma_rate},
            {"t", p.t},
            {"dim", p.dim},
            {"step", p.step},
            {"closed_plus", p.closed.var_plus},
            {"oracle_plus", p.integrated.var_plus},
            {"diff_plus", p.diff_plus},
            {"closed_minus", p.closed.var_minus},
            {"oracle_minus", p.integrated.var_minus},
            {"diff_minus", p.diff_minus},
            {"pt_min_eig", p.pt_min_eigenvalue},
            {"separable", p.variance_separable},
            {"pt_sign_agrees", p.pt_sign_agrees},
            {"within_tolerance", p.within_tolerance}};
}

int run_oracle(const OracleArgs& args) {
    const bool single_point =
        args.common.lambda || args.common.n_mean || args.t.has_value();

    std::vector<OraclePoint> points;
    if (single_point) {
        if (!args.t) {
            throw CLI::ValidationError("single-point oracle run needs --t");
        }
        const TwinBeamParams tb = resolve_twin_beam(args.common);
        const ChannelParams cp{args.common.gamma_rate, args.common.thermal_m};
        if (!args.dump_path.empty()) {
            // Moment time-series dump; the pt eigenvalue makes it expensive,
            // hence the stride.
            std::ofstream dump(args.dump_path, std::ios::binary);
            if (!dump) {
                throw std::runtime_error("cannot open dump file: " + args.dump_path);
            }
            dump << "t,trace,sigma_plus_sq,sigma_minus_sq,min_pt_eig\n";
            IntegratorConfig cfg = default_integrator_config(tb, cp);
            if (args.dim > 0) cfg.dim = args.dim;
            if (args.step > 0.0) cfg.step = args.step;
            const FockDensityMatrix rho0 = twin_beam_fock(tb, cfg.dim, cfg.tail_tolerance);
            const int stride = 10;
            integrate(rho0, cp, *args.t, cfg, nullptr,
                      [&dump](double t, const FockDensityMatrix& rho) {
                          const VariancePair v = extract_variances(rho);
                          dump << format_double(t) << ','
                               << format_double(rho.entries.trace().real()) << ','
                               << format_double(v.var_plus) << ','
                               << format_double(v.var_minus) << ','
                               << format_double(partial_transpose_min_eigenvalue(rho))
                               << '\n';
                      },
                      stride);
        }
        points.push_back(oracle_check_point(tb, cp, *args.t, args.dim, args.step));
    } else {
        points = oracle_default_grid(args.common.gamma_rate, args.dim, args.step);
    }

    bool all_ok = true;
    for (const OraclePoint& p : points) {
        all_ok = all_ok && p.within_tolerance;
    }

    std::ostringstream os;
    if (args.common.format == "csv") {
        os << "lambda,thermal_m,gamma_rate,t,dim,step,closed_plus,oracle_plus,diff_plus,"
              "closed_minus,oracle_minus,diff_minus,pt_min_eig,separable,pt_sign_agrees,"
              "within_tolerance\n";
        for (const OraclePoint& p : points) {
            append_oracle_csv(os, p);
        }
    } else {
        ordered_json doc;
        doc["command"] = "oracle";
        doc["variance_tolerance"] = kOracleVarianceTolerance;
        doc["points"] = ordered_json::array();
        for (const OraclePoint& p : points) {
            doc["points"].push_back(oracle_point_json(p));
        }
        doc["all_within_tolerance"] = all_ok;
        os << doc.dump(2) << '\n';
    }
    emit(args.common, os.str());

    std::size_t ok_count = 0;
    for (const OraclePoint& p : points) {
        ok_count += p.within_tolerance ? 1 : 0;
    }
    std::cerr << "oracle: " << ok_count << '/' << points.size()
              << " points within tolerance " << format_double(kOracleVarianceTolerance)
              << '\n';
    return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twin-beam decoherence simulator: entanglement survival and "
                 "teleportation fidelity in noisy active media"};
    app.require_subcommand(1);

    EvolveArgs evolve_args;
    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "Time scan of the evolved variances");
    add_twin_beam_flags(evolve_cmd, evolve_args.common);
    add_channel_flags(evolve_cmd, evolve_args.common);
    evolve_cmd->add_option("--t", evolve_args.t, "Single evolution time");
    evolve_cmd->add_option("--t-start", evolve_args.t_start, "Grid start time");
    evolve_cmd->add_option("--t-stop", evolve_args.t_stop, "Grid stop time");
    evolve_cmd->add_option("--t-steps", evolve_args.t_steps, "Grid point count");
    evolve_cmd->add_option("--eta", evolve_args.common.eta, "Teleportation efficiency")
        ->capture_default_str();
    add_output_flags(evolve_cmd, evolve_args.common);

    CommonOpts threshold_opts;
    CLI::App* threshold_cmd =
        app.add_subcommand("threshold", "Separability threshold time");
    add_twin_beam_flags(threshold_cmd, threshold_opts);
    add_channel_flags(threshold_cmd, threshold_opts);
    add_output_flags(threshold_cmd, threshold_opts);

    CommonOpts fidelity_opts;
    double fidelity_t = 0.0;
    CLI::App* fidelity_cmd =
        app.add_subcommand("fidelity", "Coherent-state teleportation fidelity");
    add_twin_beam_flags(fidelity_cmd, fidelity_opts);
    add_channel_flags(fidelity_cmd, fidelity_opts);
    fidelity_cmd->add_option("--t", fidelity_t, "Evolution time")->required();
    fidelity_cmd->add_option("--eta", fidelity_opts.eta, "Teleportation efficiency")
        ->capture_default_str();
    add_output_flags(fidelity_cmd, fidelity_opts);

    CommonOpts fig1_opts;
    CLI::App* fig1_cmd = app.add_subcommand(
        "fig1", "Threshold (units 1/Gamma) vs mean photon number, one column per M");
    add_output_flags(fig1_cmd, fig1_opts);

    OracleArgs oracle_args;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "Cross-check the closed forms against Fock-basis integration");
    add_twin_beam_flags(oracle_cmd, oracle_args.common);
    add_channel_flags(oracle_cmd, oracle_args.common);
    oracle_cmd->add_option("--t", oracle_args.t, "Evolution time (single-point mode)");
    oracle_cmd->add_option("--dim", oracle_args.dim, "Fock truncation per mode");
    oracle_cmd->add_option("--step", oracle_args.step, "Integrator step");
    oracle_cmd->add_option("--dump", oracle_args.dump_path,
                           "Write moment time-series CSV to PATH (single-point mode)");
    add_output_flags(oracle_cmd, oracle_args.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (evolve_cmd->parsed()) {
            return run_evolve(evolve_args);
        }
        if (threshold_cmd->parsed()) {
            return run_threshold(threshold_opts);
        }
        if (fidelity_cmd->parsed()) {
            return run_fidelity(fidelity_opts, fidelity_t);
        }
        if (fig1_cmd->parsed()) {
            return run_fig1(fig1_opts);
        }
        if (oracle_cmd->parsed()) {
            return run_oracle(oracle_args);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const AccuracyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
