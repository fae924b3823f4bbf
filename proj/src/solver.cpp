#include "spdelab/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "spdelab/rng.hpp"

namespace spdelab {

namespace {

bool power_law_kind(CoefficientKind kind) {
    return kind == CoefficientKind::heat_power || kind == CoefficientKind::allen_cahn ||
           kind == CoefficientKind::kpp;
}

// Exact one-step transition of du = C*sign(u)*sqrt(|u|) dB per cell (dB variance
// dt/dx): |u| is a squared-Bessel(0) bridge-free transition, absorbing at 0. With
// sigma^2 = C^2/dx the law of |u'| given |u*| is (sigma^2 dt / 4) * chi'^2 with zero
// degrees of freedom, i.e. u' = 0 with probability exp(-2|u*|/(sigma^2 dt)), else
// sign(u*) * Gamma(K, sigma^2 dt / 2) with K ~ Poisson(2|u*|/(sigma^2 dt)) conditioned
// positive. Mean |u*| (martingale) and variance sigma^2 |u*| dt, matching the
// Euler-Maruyama moments.
double exact_substep_sqrt(double v, double sigma2_dt, rng::CounterStream& stream) {
    if (v == 0.0) return 0.0;
    const double mean_events = 2.0 * std::abs(v) / sigma2_dt;
    const std::uint64_t k = rng::poisson_draw(mean_events, stream);
    if (k == 0) return 0.0;
    const double magnitude = rng::gamma_integer_draw(k, stream) * (0.5 * sigma2_dt);
    return v > 0.0 ? magnitude : -magnitude;
}

// Exact one-step transition of du = C*u dB per cell: geometric Brownian motion,
// sign-preserving, never absorbed.
double exact_substep_linear(double v, double sigma2_dt, rng::CounterStream& stream) {
    if (v == 0.0) return 0.0;
    const double z = stream.next_normal();
    return v * std::exp(std::sqrt(sigma2_dt) * z - 0.5 * sigma2_dt);
}

}  // namespace

FieldPath solve_path(const SpaceTimeGrid& grid, const CoefficientSpec& spec, bool include_d,
                     const InitialData& h, std::shared_ptr<const NoiseIncrements> noise,
                     Boundary boundary, const SolveOptions& options) {
    if (!noise) {
        throw std::invalid_argument("solve_path: noise increments are required");
    }
    if (noise->n_t != grid.n_t || noise->n_x != grid.n_x) {
        throw std::invalid_argument("solve_path: noise dimensions do not match the grid");
    }
    if (noise->sqrt_dt_dx != std::sqrt(grid.dt * grid.dx)) {
        throw std::invalid_argument("solve_path: noise was sampled for a different cell measure");
    }
    if (options.use_laplacian && !grid.cfl_stable && !options.allow_unstable) {
        throw std::invalid_argument(
            "solve_path: unstable grid (dt > dx^2/2); set allow_unstable to override");
    }
    const bool exact_scheme = options.scheme == StepScheme::split_step_exact;
    if (exact_scheme) {
        if (!power_law_kind(spec.kind)) {
            throw std::invalid_argument(
                "solve_path: split_step_exact requires a power-law preset (heat-power, "
                "allen-cahn, or kpp)");
        }
        if (spec.gamma != 0.5 && spec.gamma != 1.0) {
            throw std::invalid_argument(
                "solve_path: split_step_exact has exact transitions only for gamma = 1/2 "
                "(squared-Bessel) and gamma = 1 (geometric Brownian motion)");
        }
    }

    const std::size_t nx = grid.n_x;
    const std::size_t nt = grid.n_t;
    FieldPath path;
    path.grid = grid;
    path.noise = noise;
    path.coefficients = spec;
    path.include_d = include_d;
    path.boundary = boundary;
    path.scheme = options.scheme;
    path.u.resize((nt + 1) * nx);

    for (std::size_t j = 0; j < nx; ++j) {
        const double v = h.h(grid.cell_center(j));
        if (!std::isfinite(v)) throw BlowUpError(0, j);
        path.u[j] = v;
    }

    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double noise_scale = std::sqrt(grid.dt / grid.dx);
    // Dirichlet ghost cells are pinned to the data at the truncation points.
    const double ghost_left = boundary == Boundary::dirichlet ? h.h(grid.x_left) : 0.0;
    const double ghost_right = boundary == Boundary::dirichlet ? h.h(grid.x_right) : 0.0;
    // Variance coefficient of the per-cell diffusion over one step (exact scheme).
    const double sigma2_dt = spec.C * spec.C * grid.dt / grid.dx;

    for (std::size_t n = 0; n < nt; ++n) {
        const double t = grid.time(n);
        const double* cur = path.u.data() + n * nx;
        double* next = path.u.data() + (n + 1) * nx;
        for (std::size_t j = 0; j < nx; ++j) {
            const double uj = cur[j];
            double lap = 0.0;
            if (options.use_laplacian) {
                double ul;
                double ur;
                if (j > 0) {
                    ul = cur[j - 1];
                } else {
                    ul = boundary == Boundary::neumann ? cur[nx > 1 ? 1 : 0] : ghost_left;
                }
                if (j + 1 < nx) {
                    ur = cur[j + 1];
                } else {
                    ur = boundary == Boundary::neumann ? cur[nx > 1 ? nx - 2 : 0] : ghost_right;
                }
                lap = (ur - 2.0 * uj + ul) * inv_dx2;
            }
            const double x = grid.cell_center(j);
            double drift = spec.b(t, x, uj);
            if (include_d) drift += spec.d(t, x, uj);

            double value;
            if (!exact_scheme) {
                value = uj + grid.dt * (lap + drift) +
                        spec.a(t, x, uj) * noise_scale * noise->xi[n * nx + j];
            } else {
                const double v_star = uj + grid.dt * (lap + drift);
                if (!std::isfinite(v_star)) throw BlowUpError(n + 1, j);
                // Reserved counter lane per (step, cell); the high bit keeps the lane
                // space disjoint from sample_noise's lane (0, 0).
                rng::CounterStream stream(noise->seed, static_cast<std::uint32_t>(j),
                                          0x80000000u | static_cast<std::uint32_t>(n));
                value = spec.gamma == 0.5 ? exact_substep_sqrt(v_star, sigma2_dt, stream)
                                          : exact_substep_linear(v_star, sigma2_dt, stream);
            }
            if (!std::isfinite(value)) throw BlowUpError(n + 1, j);
            next[j] = value;
        }
    }
    return path;
}

}  // namespace spdelab
