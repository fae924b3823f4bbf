#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "spdelab/coefficients.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/initial_data.hpp"
#include "spdelab/noise.hpp"

namespace spdelab {

enum class Boundary {
    neumann,    // ghost cells u[-1] = u[1], u[n_x] = u[n_x-2] (zero-flux mirror)
    dirichlet,  // ghost cells pinned to h(x_left), h(x_right)
};

// Time-stepping scheme for the noise term.
//
// euler_maruyama is the reference scheme: the Gaussian increments that drive the path
// are exactly the NoiseIncrements array, which is what makes the discrete likelihood
// ratio of the measure-transfer layer well defined.
//
// split_step_exact replaces the Gaussian noise update with an exact per-cell sample of
// the degenerate diffusion du = C*sign(u)|u|^gamma dW over one dt (available for
// power-law presets with gamma in {1/2, 1}): a signed squared-Bessel(0) transition for
// gamma = 1/2 (absorbing at u = 0) and exact geometric Brownian motion for gamma = 1.
// Matched mean and variance to O(dt) with euler_maruyama, but preserves absorption
// exactly, which the Gaussian update cannot do at any affordable dt: under
// euler_maruyama every cell carries fluctuation "dust" at the noise floor
// ~(0.8 C sqrt(dt/dx))^(1/(1-gamma)), orders of magnitude above the epsilon-support
// detection thresholds, so compact-support fronts are invisible to it. Support
// measurements use this scheme; it consumes its own counter streams (seeded from the
// noise's seed) rather than the xi array, and such paths carry no usable likelihood
// ratio (log_weight rejects them).
enum class StepScheme {
    euler_maruyama,
    split_step_exact,
};

struct SolveOptions {
    bool use_laplacian = true;      // false: pure SDE per cell (reduction tests)
    bool allow_unstable = false;    // override CFL refusal
    StepScheme scheme = StepScheme::euler_maruyama;
};

// One realized solution path: (n_t+1) x n_x field values plus everything needed to
// reweight or diagnose it later (grid, driving noise, coefficients, boundary).
struct FieldPath {
    SpaceTimeGrid grid;
    std::shared_ptr<const NoiseIncrements> noise;
    CoefficientSpec coefficients;
    bool include_d = false;
    Boundary boundary = Boundary::neumann;
    StepScheme scheme = StepScheme::euler_maruyama;
    std::vector<double> u;  // row-major (n_t+1) x n_x

    double at(std::size_t n, std::size_t j) const { return u[n * grid.n_x + j]; }
    std::span<const double> slice(std::size_t n) const {
        return {u.data() + n * grid.n_x, grid.n_x};
    }
    std::span<const double> terminal_slice() const { return slice(grid.n_t); }
};

// Steps u[n+1][j] = u[n][j] + dt*(laplacian + b + [d if include_d]) + noise update,
// with the ghost-cell convention of `boundary`. The same noise array can drive either
// equation of the pair (include_d false/true), so paths are couplable.
//
// Throws std::invalid_argument for unstable grids without override, dimension
// mismatches, or scheme/coefficient combinations that are not defined; throws
// BlowUpError (carrying the first offending (n, j)) if a non-finite value appears.
FieldPath solve_path(const SpaceTimeGrid& grid, const CoefficientSpec& spec, bool include_d,
                     const InitialData& h, std::shared_ptr<const NoiseIncrements> noise,
                     Boundary boundary, const SolveOptions& options = {});

}  // namespace spdelab
