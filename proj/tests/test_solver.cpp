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

using namespace spdelab;

namespace {

std::shared_ptr<const NoiseIncrements> noise_for(const SpaceTimeGrid& grid,
                                                 std::uint64_t seed) {
    return std::make_shared<NoiseIncrements>(sample_noise(grid, seed));
}

// Whole-line heat flow of a Gaussian stays Gaussian: variance sigma^2 + 2t.
double gaussian_heat_solution(double amplitude, double sigma, double t, double x) {
    const double s2 = sigma * sigma + 2.0 * t;
    return amplitude * sigma / std::sqrt(s2) * std::exp(-x * x / (2.0 * s2));
}

}  // namespace

TEST_CASE("deterministic heat flow matches the closed-form Gaussian solution") {
    const auto grid = build_grid(0.05, -2.0, 2.0, 52, 64);
    REQUIRE(grid.cfl_stable);
    const auto data = gaussian_data(0.0, 0.35, 1.0);
    const auto path = solve_path(grid, deterministic_heat(), true, data, noise_for(grid, 1),
                                 Boundary::neumann);

    double max_err = 0.0;
    for (std::size_t j = 0; j < grid.n_x; ++j) {
        const double x = grid.cell_center(j);
        if (std::abs(x) > 1.0) continue;  // interior, away from the truncation
        const double exact = gaussian_heat_solution(1.0, 0.35, grid.t_end, x);
        max_err = std::max(max_err, std::abs(path.at(grid.n_t, j) - exact));
    }
    CHECK(max_err <= 5.0 * (grid.dx * grid.dx + grid.dt));
}

TEST_CASE("terminal variance matches the dense-propagator oracle") {
    // With a constant diffusion coefficient the scheme is linear Gaussian:
    // u[N] = sum_m A^(N-1-m) * (a0 * sqrt(dt/dx) * xi[m]), so the terminal variance
    // is a0^2 * (dt/dx) * sum_m sum_k (A^(N-1-m))[j][k]^2 exactly.
    const std::size_t nx = 8;
    const std::size_t nt = 16;
    const double a0 = 0.3;
    const auto grid = build_grid(0.05, 0.0, 1.0, nt, nx);
    REQUIRE(grid.cfl_stable);

    const double r = grid.dt / (grid.dx * grid.dx);
    std::vector<std::vector<double>> A(nx, std::vector<double>(nx, 0.0));
    for (std::size_t j = 0; j < nx; ++j) {
        A[j][j] = 1.0 - 2.0 * r;
        if (j == 0) {
            A[j][1] += 2.0 * r;  // mirror ghost u[-1] = u[1]
        } else if (j == nx - 1) {
            A[j][nx - 2] += 2.0 * r;
        } else {
            A[j][j - 1] += r;
            A[j][j + 1] += r;
        }
    }

    auto multiply = [&](const std::vector<std::vector<double>>& M) {
        std::vector<std::vector<double>> out(nx, std::vector<double>(nx, 0.0));
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t k = 0; k < nx; ++k)
                for (std::size_t j = 0; j < nx; ++j) out[i][j] += M[i][k] * A[k][j];
        return out;
    };

    std::vector<double> oracle(nx, 0.0);
    std::vector<std::vector<double>> power(nx, std::vector<double>(nx, 0.0));
    for (std::size_t j = 0; j < nx; ++j) power[j][j] = 1.0;  // A^0
    for (std::size_t p = 0; p < nt; ++p) {
        for (std::size_t j = 0; j < nx; ++j)
            for (std::size_t k = 0; k < nx; ++k) oracle[j] += power[j][k] * power[j][k];
        power = multiply(power);
    }
    for (double& v : oracle) v *= a0 * a0 * grid.dt / grid.dx;

    const auto spec = constant_coefficients(a0, 0.0);
    const auto data = constant_data(0.0);
    const std::size_t n_paths = 4000;
    std::vector<double> sum(nx, 0.0);
    std::vector<double> sum_sq(nx, 0.0);
    for (std::size_t k = 0; k < n_paths; ++k) {
        const auto path =
            solve_path(grid, spec, false, data, noise_for(grid, 1000 + k), Boundary::neumann);
        for (std::size_t j = 0; j < nx; ++j) {
            const double u = path.at(nt, j);
            sum[j] += u;
            sum_sq[j] += u * u;
        }
    }
    for (std::size_t j = 0; j < nx; ++j) {
        const double mean = sum[j] / n_paths;
        const double var = sum_sq[j] / n_paths - mean * mean;
        CHECK(var == doctest::Approx(oracle[j]).epsilon(0.15));
    }
}

TEST_CASE("mass is conserved under zero-flux boundaries when the data stays interior") {
    const auto grid = build_grid(0.02, -2.0, 2.0, 16, 64);
    REQUIRE(grid.cfl_stable);
    const auto data = bump_data(0.0, 0.5, 1.0);
    const auto path =
        solve_path(grid, deterministic_heat(), true, data, noise_for(grid, 3), Boundary::neumann);

    double mass0 = 0.0;
    double mass_t = 0.0;
    for (std::size_t j = 0; j < grid.n_x; ++j) {
        mass0 += path.at(0, j) * grid.dx;
        mass_t += path.at(grid.n_t, j) * grid.dx;
    }
    CHECK(mass_t == doctest::Approx(mass0).epsilon(1e-10));
}

TEST_CASE("pinned boundaries absorb mass, mirrored ones do not") {
    const auto grid = build_grid(0.05, -1.0, 1.0, 128, 64);
    REQUIRE(grid.cfl_stable);
    const auto data = bump_data(0.0, 0.9, 1.0);
    const auto noise = noise_for(grid, 4);
    const auto neumann =
        solve_path(grid, deterministic_heat(), true, data, noise, Boundary::neumann);
    const auto dirichlet =
        solve_path(grid, deterministic_heat(), true, data, noise, Boundary::dirichlet);

    auto mass = [&](const FieldPath& p, std::size_t n) {
        double m = 0.0;
        for (std::size_t j = 0; j < grid.n_x; ++j) m += p.at(n, j) * grid.dx;
        return m;
    };
    CHECK(mass(dirichlet, grid.n_t) < mass(neumann, grid.n_t));
    CHECK(mass(dirichlet, grid.n_t) < mass(dirichlet, 0));
}

TEST_CASE("unstable grids are refused unless overridden") {
    const auto grid = build_grid(1.0, 0.0, 10.0, 100, 100);
    REQUIRE_FALSE(grid.cfl_stable);
    const auto data = constant_data(0.0);
    CHECK_THROWS_AS(solve_path(grid, deterministic_heat(), true, data, noise_for(grid, 5),
                               Boundary::neumann),
                    std::invalid_argument);

    SolveOptions options;
    options.allow_unstable = true;
    const auto path = solve_path(grid, deterministic_heat(), true, data, noise_for(grid, 5),
                                 Boundary::neumann, options);
    CHECK(path.at(grid.n_t, 50) == 0.0);

    // Without the Laplacian there is no stability constraint to enforce.
    SolveOptions no_lap;
    no_lap.use_laplacian = false;
    CHECK_NOTHROW(solve_path(grid, constant_coefficients(1.0, 0.0), true, data,
                             noise_for(grid, 5), Boundary::neumann, no_lap));
}

TEST_CASE("single cell without Laplacian accumulates exactly the Brownian increments") {
    const auto grid = build_grid(1.0, 0.0, 1.0, 64, 1);
    const auto noise = noise_for(grid, 6);
    SolveOptions options;
    options.use_laplacian = false;
    const auto path = solve_path(grid, constant_coefficients(1.0, 0.0), false, constant_data(0.0),
                                 noise, Boundary::neumann, options);
    double w = 0.0;
    for (std::size_t n = 0; n < grid.n_t; ++n) w += noise->dW(n, 0);
    // dx = 1, so u = (1/dx) * sum dW = sum dW.
    CHECK(path.at(grid.n_t, 0) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("a non-finite value aborts the path with its location") {
    const auto grid = build_grid(0.1, 0.0, 1.0, 4, 4);
    REQUIRE(grid.cfl_stable);
    const auto spec = preset("allen-cahn", 1.0, 0.5);
    try {
        solve_path(grid, spec, true, constant_data(1e150), noise_for(grid, 7),
                   Boundary::neumann);
        FAIL("expected BlowUpError");
    } catch (const BlowUpError& e) {
        CHECK(e.time_index == 1);
        CHECK(e.space_index < grid.n_x);
    }
}

TEST_CASE("one noise array drives a coupled pair of equations") {
    const auto grid = build_grid(0.05, 0.0, 1.0, 128, 16);
    REQUIRE(grid.cfl_stable);
    const auto noise = noise_for(grid, 8);
    const auto data = constant_data(0.5);

    // d identically zero: including it cannot change a single bit.
    const auto heat_spec = preset("heat-power", 1.0, 0.5);
    const auto without_d = solve_path(grid, heat_spec, false, data, noise, Boundary::neumann);
    const auto with_d = solve_path(grid, heat_spec, true, data, noise, Boundary::neumann);
    CHECK(without_d.u == with_d.u);

    // A real reaction term separates the coupled pair.
    const auto ac_spec = preset("allen-cahn", 1.0, 0.5);
    const auto heat_path = solve_path(grid, ac_spec, false, data, noise, Boundary::neumann);
    const auto direct_path = solve_path(grid, ac_spec, true, data, noise, Boundary::neumann);
    CHECK(heat_path.u != direct_path.u);
    // Same initial slice, same driving noise.
    CHECK(std::equal(heat_path.u.begin(), heat_path.u.begin() + 16, direct_path.u.begin()));
}

TEST_CASE("noise and grid must agree") {
    const auto grid = build_grid(0.05, 0.0, 1.0, 128, 16);
    const auto other_grid = build_grid(0.05, 0.0, 1.0, 128, 32);
    const auto wrong_dims = noise_for(other_grid, 9);
    CHECK_THROWS_AS(solve_path(grid, deterministic_heat(), true, constant_data(0.0), wrong_dims,
                               Boundary::neumann),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_path(grid, deterministic_heat(), true, constant_data(0.0), nullptr,
                               Boundary::neumann),
                    std::invalid_argument);

    // Same shape but sampled with a different cell measure.
    const auto scaled_grid = build_grid(0.10, 0.0, 1.0, 128, 16);
    const auto wrong_measure = noise_for(scaled_grid, 9);
    CHECK_THROWS_AS(solve_path(grid, deterministic_heat(), true, constant_data(0.0),
                               wrong_measure, Boundary::neumann),
                    std::invalid_argument);
}

TEST_CASE("constant field is a fixed point of both boundary conventions") {
    const auto grid = build_grid(0.02, 0.0, 1.0, 64, 16);
    const auto data = constant_data(0.7);
    for (const auto boundary : {Boundary::neumann, Boundary::dirichlet}) {
        const auto path =
            solve_path(grid, deterministic_heat(), true, data, noise_for(grid, 10), boundary);
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            CHECK(path.at(grid.n_t, j) == 0.7);
        }
    }
}
