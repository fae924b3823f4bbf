#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "spdelab/coefficients.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/solver.hpp"

namespace spdelab {

// Everything the Girsanov reweighting of one path needs: the running quadratic
// functional of the ratio process, the localization stopping index, the stopped
// log-density, and the survival flag.
struct TransferRecord {
    // quad[m] = sum over steps before m of sum_j R(t, x_j, u)^2 * dt * dx; size
    // n_t + 1, quad[0] = 0, nondecreasing.
    std::vector<double> quad;
    // First index m with quad[m] >= n, or n_t if the level is never reached. (On the
    // null event that quad first reaches n exactly at the final index, tau_index is
    // n_t while survived is false; survived is defined by the quad value, not by
    // tau_index.)
    std::size_t tau_index = 0;
    // log Xi stopped at tau_index: sum over steps strictly before tau_index of
    // R * dW minus quad[tau_index] / 2.
    double log_xi = 0.0;
    // quad at the final index stayed below n: the path survived to time T.
    bool survived = false;
    // Localization level.
    double n = 0.0;

    double quad_final() const { return quad.back(); }
};

// Drift-to-diffusion ratio d(t,x,u)/a(t,x,u), computed by direct division.
// Conventions: a = 0 and d = 0 gives 0 (both presets have d(0) = 0 where a
// degenerates); a = 0 with d != 0 throws RatioUndefinedError carrying (t, x, u).
double ratio(double t, double x, double u, const CoefficientSpec& spec);

// Running quadratic functional of the ratio along a path: array of size n_t + 1 with
// entry m equal to sum_{steps < m} sum_j R^2 * dt * dx (left-endpoint rule in time,
// midpoint cells in space — the measurability convention of the stochastic integral).
std::vector<double> accumulate_quadratic(const FieldPath& path, const CoefficientSpec& spec);

// Smallest index m with quad[m] >= n, else the last index. n <= 0 gives 0
// (immediate stop).
std::size_t localization_time(std::span<const double> quad, double n);

// Stopped log-density for one localization level. The stochastic integral uses
// exactly the dW array that drove the path; paths stepped with split_step_exact are
// rejected (their randomness is not the Gaussian increment array).
TransferRecord log_weight(const FieldPath& path, const CoefficientSpec& spec, double n);

// All levels of a schedule from one pass over the path (quad and the stochastic
// integral are shared; each level stops independently).
std::vector<TransferRecord> log_weight_schedule(const FieldPath& path,
                                                const CoefficientSpec& spec,
                                                std::span<const double> schedule);

struct Expectation {
    double estimate;        // (1/N) sum_k f_k * exp(log_xi_k) * 1{survived_k}
    double standard_error;  // sample-variance SE of the weighted terms
    double ess;             // (sum w)^2 / sum w^2 of the weights alone
};

// Monte Carlo reweighted expectation. All records must share the same level n.
// Log-domain safety: weights are exponentiated only after subtracting the maximum
// survivor log-weight (max-shift), then rescaled.
Expectation reweighted_expectation(std::span<const double> functional_values,
                                   std::span<const TransferRecord> records);

// Convenience form closer to the mathematical statement: a bounded functional of the
// path plus (path, record) pairs. Prefer the span form for large ensembles (it does
// not require keeping paths alive).
Expectation reweighted_expectation(
    const std::function<double(const FieldPath&)>& functional,
    const std::vector<std::pair<FieldPath, TransferRecord>>& ensemble);

}  // namespace spdelab
