#include <charconv>
#include <cmath>
#include <string>

#include "doctest.h"
#include "twinbeam/separability.hpp"
#include "twinbeam/tables.hpp"
#include "twinbeam/teleportation.hpp"

using namespace twinbeam;

TEST_CASE("time grid is strictly increasing and hits the endpoints") {
    const std::vector<double> grid = make_time_grid(0.0, 2.0, 21);
    CHECK(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
    }
    CHECK_THROWS_AS(make_time_grid(1.0, 1.0, 5), std::domain_error);
    CHECK_THROWS_AS(make_time_grid(0.0, 1.0, 1), std::domain_error);
}

TEST_CASE("evolve scan rows match direct library calls") {
    const TwinBeamParams tb = twin_beam_from_lambda(1.0);
    const ChannelParams cp{1.0, 0.5};
    const std::vector<double> times = make_time_grid(0.0, 1.2, 7);
    const std::vector<EvolveRow> rows = evolve_scan(tb, cp, times, 1.0);
    REQUIRE(rows.size() == times.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const EvolutionResult r = evolve(tb, cp, times[i]);
        CHECK(rows[i].t == r.time);
        CHECK(rows[i].tau == r.tau);
        CHECK(rows[i].sigma_plus_sq == r.variances.var_plus);
        CHECK(rows[i].sigma_minus_sq == r.variances.var_minus);
        CHECK(rows[i].separable == variance_criterion(r.variances).separable);
        CHECK(rows[i].fidelity == fidelity(tb, cp, times[i]));
    }
}

TEST_CASE("evolve scan: separability flips exactly once across the threshold") {
    const TwinBeamParams tb = twin_beam_from_lambda(1.0);
    const ChannelParams cp{1.0, 0.5};
    const double ts = threshold_time(tb, cp).value();
    const std::vector<EvolveRow> rows =
        evolve_scan(tb, cp, make_time_grid(0.0, 2.0 * ts, 101), 1.0);
    int flips = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].separable != rows[i - 1].separable) {
            ++flips;
        }
    }
    CHECK(flips == 1);
    CHECK_FALSE(rows.front().separable);
    CHECK(rows.back().separable);
}

TEST_CASE("fig1 table: monotone, ordered and saturating") {
    const Fig1Table table = fig1_table(fig1_default_n_grid());
    REQUIRE(table.n_grid.size() == 201);
    REQUIRE(table.m_values == kFig1DefaultM);

    // N = 0 row is all zeros
    for (double ts : table.thresholds.front()) {
        CHECK(ts == 0.0);
    }
    // each curve is monotone increasing in N
    for (std::size_t j = 0; j < table.m_values.size(); ++j) {
        for (std::size_t i = 1; i < table.n_grid.size(); ++i) {
            CHECK(table.thresholds[i][j] > table.thresholds[i - 1][j]);
        }
    }
    // curve ordering at every N > 0: smaller M lies above
    for (std::size_t i = 1; i < table.n_grid.size(); ++i) {
        for (std::size_t j = 1; j < table.m_values.size(); ++j) {
            CHECK(table.thresholds[i][j - 1] > table.thresholds[i][j]);
        }
    }
    // the N = 20 values sit within 2% of the saturation thresholds
    for (std::size_t j = 0; j < table.m_values.size(); ++j) {
        const double sat =
            saturation_threshold(ChannelParams{1.0, table.m_values[j]}).value();
        CHECK(table.thresholds.back()[j] > 0.98 * sat);
        CHECK(table.thresholds.back()[j] <= sat);
    }
    // exact saturation anchors for the outer curves
    CHECK(saturation_threshold(ChannelParams{1.0, 0.1}).value() ==
          doctest::Approx(1.791759469228055).epsilon(1e-14));
    CHECK(saturation_threshold(ChannelParams{1.0, 1.0}).value() ==
          doctest::Approx(0.40546510810816438).epsilon(1e-14));
}

TEST_CASE("oracle point report carries the comparison data") {
    const TwinBeamParams tb = twin_beam_from_lambda(0.2);
    const ChannelParams cp{1.0, 0.1};
    const OraclePoint p = oracle_check_point(tb, cp, 0.1);
    CHECK(p.within_tolerance);
    CHECK(p.diff_plus < kOracleVarianceTolerance);
    CHECK(p.diff_minus < kOracleVarianceTolerance);
    CHECK(p.pt_sign_agrees);
    CHECK(p.closed.var_plus == evolve(tb, cp, 0.1).variances.var_plus);
    CHECK(p.dim >= minimal_twin_beam_dim(tb.x, 1e-8));
}

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 0.6230812603996639, 1e-300, 12345.6789}) {
        const std::string s = format_double(v);
        double back = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(ec == std::errc{});
        CHECK(ptr == s.data() + s.size());
        CHECK(back == v);
    }
}
