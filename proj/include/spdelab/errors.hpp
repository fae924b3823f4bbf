#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spdelab {

// A path produced a non-finite value. Paths are aborted at the first bad cell so
// ensembles never average over silent NaNs; the offending (time, cell) index pair
// is carried for diagnosis.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(std::size_t time_index, std::size_t space_index)
        : std::runtime_error("solution blew up at time index " + std::to_string(time_index) +
                             ", cell " + std::to_string(space_index)),
          time_index(time_index),
          space_index(space_index) {}

    std::size_t time_index;
    std::size_t space_index;
};

// The drift-to-diffusion ratio d/a was requested at a state where a = 0 but d != 0,
// so no finite ratio exists. Carries the evaluation point.
class RatioUndefinedError : public std::runtime_error {
public:
    RatioUndefinedError(double t, double x, double u)
        : std::runtime_error("ratio d/a undefined (a = 0, d != 0) at t = " + std::to_string(t) +
                             ", x = " + std::to_string(x) + ", u = " + std::to_string(u)),
          t(t),
          x(x),
          u(u) {}

    double t;
    double x;
    double u;
};

}  // namespace spdelab
