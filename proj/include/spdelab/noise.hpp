#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spdelab/grid.hpp"

namespace spdelab {

// The driving space-time white noise, discretized as one independent N(0,1) draw xi
// per space-time cell with the convention dW(n,j) = sqrt(dt*dx) * xi[n][j].
struct NoiseIncrements {
    std::size_t n_t;
    std::size_t n_x;
    std::uint64_t seed;
    double sqrt_dt_dx;           // sqrt(dt*dx), fixed by the grid that sampled this
    std::vector<double> xi;      // row-major n_t x n_x standard normals

    double operator()(std::size_t n, std::size_t j) const { return xi[n * n_x + j]; }
    double dW(std::size_t n, std::size_t j) const { return sqrt_dt_dx * xi[n * n_x + j]; }
};

// Fills the whole lattice from the counter-based generator; a pure function of
// (grid dimensions, seed), so identical inputs give bit-identical arrays.
NoiseIncrements sample_noise(const SpaceTimeGrid& grid, std::uint64_t seed);

}  // namespace spdelab
