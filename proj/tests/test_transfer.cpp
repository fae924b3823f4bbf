#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "spdelab/coefficients.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/initial_data.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/transfer.hpp"

using namespace spdelab;

namespace {

std::shared_ptr<const NoiseIncrements> noise_for(const SpaceTimeGrid& grid,
                                                 std::uint64_t seed) {
    return std::make_shared<NoiseIncrements>(sample_noise(grid, seed));
}

// A path with a prescribed constant field, for functional oracles.
FieldPath constant_path(const SpaceTimeGrid& grid, double value,
                        const CoefficientSpec& spec) {
    FieldPath path;
    path.grid = grid;
    path.coefficients = spec;
    path.u.assign((grid.n_t + 1) * grid.n_x, value);
    return path;
}

}  // namespace

TEST_CASE("ratio follows the division conventions") {
    const auto ac = preset("allen-cahn", 1.0, 0.5);
    // d(4) = 2*4*(1-16) = -120, a(4) = 2: the quotient is exact.
    CHECK(ratio(0.0, 0.0, 4.0, ac) == -60.0);
    // Both vanish at u = 0: convention 0/0 = 0.
    CHECK(ratio(0.0, 0.0, 0.0, ac) == 0.0);
    // d(1) = 0 with a(1) = 1.
    CHECK(ratio(0.0, 0.0, 1.0, ac) == 0.0);
    // Odd numerator over odd denominator: the ratio is even in u.
    CHECK(ratio(0.0, 0.0, -4.0, ac) == ratio(0.0, 0.0, 4.0, ac));

    const auto bad = constant_coefficients(0.0, 0.5);
    try {
        ratio(0.25, 0.5, 0.75, bad);
        FAIL("expected RatioUndefinedError");
    } catch (const RatioUndefinedError& e) {
        CHECK(e.t == 0.25);
        CHECK(e.x == 0.5);
        CHECK(e.u == 0.75);
    }
}

TEST_CASE("quadratic functional of a constant field has a closed form") {
    // Single cell, u = 2, allen-cahn C=1, gamma=1/2: R^2 = (-12)^2 / 2 = 72, so
    // quad(T) = 72 * T * dx.
    const auto grid = build_grid(0.5, 0.0, 1.0, 20, 1);
    const auto ac = preset("allen-cahn", 1.0, 0.5);
    const auto path = constant_path(grid, 2.0, ac);
    const auto quad = accumulate_quadratic(path, ac);
    REQUIRE(quad.size() == grid.n_t + 1);
    CHECK(quad.front() == 0.0);
    CHECK(quad.back() == doctest::Approx(72.0 * 0.5 * 1.0).epsilon(1e-12));
    for (std::size_t m = 0; m < grid.n_t; ++m) {
        CHECK(quad[m] <= quad[m + 1]);  // nondecreasing
    }
    // Left-endpoint rule: the first entry after zero is one full step's worth.
    CHECK(quad[1] == doctest::Approx(72.0 * grid.dt * grid.dx).epsilon(1e-12));
}

TEST_CASE("localization_time picks the first crossing") {
    const std::vector<double> quad = {0.0, 0.5, 1.2, 2.0};
    CHECK(localization_time(quad, 1.0) == 2);
    CHECK(localization_time(quad, 0.4) == 1);
    CHECK(localization_time(quad, 2.0) == 3);
    CHECK(localization_time(quad, 5.0) == 3);  // never reached: last index
    CHECK(localization_time(quad, 0.0) == 0);
    CHECK(localization_time(quad, -1.0) == 0);
}

TEST_CASE("single-cell reduction reproduces the classical likelihood ratio") {
    // a = 1, d = mu: log Xi must equal mu*W_T - mu^2*T/2 with W_T the summed
    // increments, path by path.
    const double mu = 0.5;
    const auto grid = build_grid(1.0, 0.0, 1.0, 256, 1);
    const auto spec = constant_coefficients(1.0, mu);
    SolveOptions options;
    options.use_laplacian = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto noise = noise_for(grid, 500 + seed);
        const auto path = solve_path(grid, spec, false, constant_data(0.0), noise,
                                     Boundary::neumann, options);
        double w_total = 0.0;
        for (std::size_t m = 0; m < grid.n_t; ++m) w_total += noise->dW(m, 0);

        const auto record = log_weight(path, spec, 1.0);
        CHECK(record.survived);  // quad(T) = mu^2 * T * dx = 0.25 < 1
        CHECK(record.tau_index == grid.n_t);
        CHECK(record.quad_final() == doctest::Approx(mu * mu * 1.0).epsilon(1e-12));
        CHECK(record.log_xi ==
              doctest::Approx(mu * w_total - 0.5 * mu * mu).epsilon(1e-12));
    }
}

TEST_CASE("schedule records agree with a direct recomputation") {
    const auto grid = build_grid(0.1, 0.0, 1.0, 64, 8);
    REQUIRE(grid.cfl_stable);
    const auto spec = preset("allen-cahn", 1.0, 0.5);
    const auto noise = noise_for(grid, 77);
    const auto path =
        solve_path(grid, spec, false, constant_data(0.6), noise, Boundary::neumann);

    // Plain-loop reimplementation of both running sums.
    std::vector<double> quad(grid.n_t + 1, 0.0);
    std::vector<double> stoch(grid.n_t + 1, 0.0);
    for (std::size_t m = 0; m < grid.n_t; ++m) {
        double q = 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double r = ratio(grid.time(m), grid.cell_center(j), path.at(m, j), spec);
            q += r * r;
            s += r * noise->dW(m, j);
        }
        quad[m + 1] = quad[m] + q * grid.dt * grid.dx;
        stoch[m + 1] = stoch[m] + s;
    }

    const std::vector<double> schedule = {0.001, 0.05, 1.0, 8.0};
    const auto records = log_weight_schedule(path, spec, schedule);
    REQUIRE(records.size() == schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& rec = records[i];
        CHECK(rec.n == schedule[i]);
        // tau: first index at or past the level.
        std::size_t tau = grid.n_t;
        for (std::size_t m = 0; m <= grid.n_t; ++m) {
            if (quad[m] >= schedule[i]) {
                tau = m;
                break;
            }
        }
        CHECK(rec.tau_index == tau);
        CHECK(rec.log_xi == doctest::Approx(stoch[tau] - 0.5 * quad[tau]).epsilon(1e-10));
        CHECK(rec.survived == (quad[grid.n_t] < schedule[i]));
        CHECK(rec.quad_final() == doctest::Approx(quad[grid.n_t]).epsilon(1e-10));
        CHECK(rec.quad.size() == grid.n_t + 1);
    }
    // Single-level convenience form matches the schedule form.
    const auto single = log_weight(path, spec, 1.0);
    CHECK(single.log_xi == records[2].log_xi);
    CHECK(single.tau_index == records[2].tau_index);
}

TEST_CASE("reweighted expectation: exact unit case and input validation") {
    const std::size_t n = 1000;
    std::vector<TransferRecord> records(n);
    std::vector<double> ones(n, 1.0);
    for (auto& rec : records) {
        rec.quad = {0.0};
        rec.log_xi = 0.0;
        rec.survived = true;
        rec.n = 1.0;
    }
    const auto result = reweighted_expectation(ones, records);
    CHECK(result.estimate == 1.0);  // bit-exact: every weighted term is exactly 1
    CHECK(result.standard_error == 0.0);
    CHECK(result.ess == static_cast<double>(n));

    // Mixed levels are rejected.
    records[5].n = 2.0;
    CHECK_THROWS_AS(reweighted_expectation(ones, records), std::invalid_argument);
    records[5].n = 1.0;

    // Length mismatch and empty input.
    std::vector<double> short_values(n - 1, 1.0);
    CHECK_THROWS_AS(reweighted_expectation(short_values, records), std::invalid_argument);
    CHECK_THROWS_AS(
        reweighted_expectation(std::span<const double>{}, std::span<const TransferRecord>{}),
        std::invalid_argument);

    // No survivors: all terms are exactly zero.
    for (auto& rec : records) rec.survived = false;
    const auto dead = reweighted_expectation(ones, records);
    CHECK(dead.estimate == 0.0);
    CHECK(dead.standard_error == 0.0);
    CHECK(dead.ess == 0.0);
}

TEST_CASE("effective sample size of the weights is scale-invariant") {
    std::vector<TransferRecord> records(3);
    std::vector<double> values = {10.0, 20.0, 30.0};
    const double logs[] = {0.0, 0.0, std::log(2.0)};
    for (std::size_t k = 0; k < 3; ++k) {
        records[k].quad = {0.0};
        records[k].log_xi = logs[k];
        records[k].survived = true;
        records[k].n = 4.0;
    }
    // Weights (1, 1, 2): ESS = (1+1+2)^2 / (1+1+4) = 16/6.
    const auto result = reweighted_expectation(values, records);
    CHECK(result.ess == doctest::Approx(16.0 / 6.0).epsilon(1e-12));

    // Shifting every log-weight by a constant changes nothing.
    for (auto& rec : records) rec.log_xi += 7.0;
    CHECK(reweighted_expectation(values, records).ess ==
          doctest::Approx(16.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("stopped weights freeze at the crossing step") {
    // Force an early crossing with a large constant ratio: quad(T) = mu^2 T dx well
    // above the level, so tau lands strictly inside and survived is false.
    const double mu = 4.0;
    const auto grid = build_grid(1.0, 0.0, 1.0, 128, 1);
    const auto spec = constant_coefficients(1.0, mu);
    SolveOptions options;
    options.use_laplacian = false;
    const auto noise = noise_for(grid, 31);
    const auto path = solve_path(grid, spec, false, constant_data(0.0), noise,
                                 Boundary::neumann, options);
    const auto record = log_weight(path, spec, 1.0);
    CHECK_FALSE(record.survived);
    CHECK(record.tau_index < grid.n_t);
    // quad crosses 1.0 at tau but not before.
    CHECK(record.quad[record.tau_index] >= 1.0);
    CHECK(record.quad[record.tau_index - 1] < 1.0);
    // The stopped integral uses increments strictly before tau.
    double s = 0.0;
    for (std::size_t m = 0; m < record.tau_index; ++m) s += mu * noise->dW(m, 0);
    CHECK(record.log_xi ==
          doctest::Approx(s - 0.5 * record.quad[record.tau_index]).epsilon(1e-10));
}
