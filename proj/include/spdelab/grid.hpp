#pragma once

#include <cstddef>
#include <stdexcept>

namespace spdelab {

// Uniform space-time lattice: n_t steps of size dt on [0, t_end], n_x cells of size
// dx on [x_left, x_right]. Field values live at cell centers x_j = x_left + (j+1/2)dx
// and time levels t_n = n*dt.
struct SpaceTimeGrid {
    double t_end;
    double x_left;
    double x_right;
    std::size_t n_t;
    std::size_t n_x;
    double dt;
    double dx;
    // dt <= dx^2/2, the stability bound of the explicit heat scheme. Solvers refuse
    // unstable grids unless explicitly overridden.
    bool cfl_stable;

    double time(std::size_t n) const { return static_cast<double>(n) * dt; }
    double cell_center(std::size_t j) const {
        return x_left + (static_cast<double>(j) + 0.5) * dx;
    }
    double length() const { return x_right - x_left; }
};

inline SpaceTimeGrid build_grid(double t_end, double x_left, double x_right,
                                std::size_t n_t, std::size_t n_x) {
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("build_grid: non-positive time extent t_end");
    }
    if (!(x_right > x_left)) {
        throw std::invalid_argument("build_grid: non-positive spatial extent (x_right <= x_left)");
    }
    if (n_t < 1) {
        throw std::invalid_argument("build_grid: zero time step count n_t");
    }
    if (n_x < 1) {
        throw std::invalid_argument("build_grid: zero spatial cell count n_x");
    }
    SpaceTimeGrid g;
    g.t_end = t_end;
    g.x_left = x_left;
    g.x_right = x_right;
    g.n_t = n_t;
    g.n_x = n_x;
    g.dt = t_end / static_cast<double>(n_t);
    g.dx = (x_right - x_left) / static_cast<double>(n_x);
    g.cfl_stable = g.dt <= g.dx * g.dx / 2.0;
    return g;
}

}  // namespace spdelab
