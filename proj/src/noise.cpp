#include "spdelab/noise.hpp"

#include <cmath>

#include "spdelab/rng.hpp"

namespace spdelab {

NoiseIncrements sample_noise(const SpaceTimeGrid& grid, std::uint64_t seed) {
    NoiseIncrements noise;
    noise.n_t = grid.n_t;
    noise.n_x = grid.n_x;
    noise.seed = seed;
    noise.sqrt_dt_dx = std::sqrt(grid.dt * grid.dx);

    const std::size_t count = grid.n_t * grid.n_x;
    noise.xi.resize(count);
    // One Philox block yields two normals; blocks are indexed by counter, so the
    // array is a pure function of (dimensions, seed). Lane (0, 0) is reserved for
    // this layout (see rng::CounterStream for the other lanes).
    const auto key = rng::key_from_seed(seed);
    for (std::size_t i = 0; i < count; i += 2) {
        const std::uint64_t block = i / 2;
        const rng::Counter ctr = {static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32), 0u, 0u};
        const auto out = rng::philox4x32(ctr, key);
        const std::uint64_t hi = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        const std::uint64_t lo = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        const auto z = rng::normals_from_bits(hi, lo);
        noise.xi[i] = z[0];
        if (i + 1 < count) noise.xi[i + 1] = z[1];
    }
    return noise;
}

}  // namespace spdelab
