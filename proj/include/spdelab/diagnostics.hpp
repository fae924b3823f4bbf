#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spdelab/initial_data.hpp"
#include "spdelab/solver.hpp"

namespace spdelab {

// Epsilon-support measurement of one path: per time slice, the smallest index
// interval containing every cell with |u| > epsilon, plus the space-time union and a
// boundary-contact flag. "Compact support" is undecidable from floating-point fields;
// this epsilon-proxy is the measured object and every support claim is relative to
// its epsilon.
struct SupportProfile {
    struct SliceSupport {
        bool empty = true;
        std::size_t left = 0;   // cell indices, inclusive
        std::size_t right = 0;
        double width = 0.0;     // (right - left + 1) * dx, or 0 when empty
    };

    double epsilon = 0.0;
    // Grid placement, so index intervals convert to coordinates without the path.
    double x_left = 0.0;
    double dx = 0.0;
    std::vector<SliceSupport> slices;  // size n_t + 1, one per time level
    SliceSupport union_support;        // over all time levels
    // Some slice's support entered the outer 10% of the cells on either side.
    bool touched_boundary = false;
};

SupportProfile support_profile(const FieldPath& path, double epsilon);

// Discrete quadratic-integrability functional of a path:
//   (4/C^2) * sum_{n < n_t} sum_j |u|^(2(1-gamma)) * (u^4 - 2u^2 + 1) * dt * dx.
// For the Allen-Cahn preset this equals the final entry of accumulate_quadratic on
// the same path (independent code paths, same quadrature). Convention at gamma = 1:
// |u|^0 = 1 including u = 0 (the constant term survives on dead zones), which is the
// limit of the expression and differs there from the ratio-based quadratic sum.
double integrability_functional(const FieldPath& path, double C, double gamma);

// Analytic heat-semigroup oracle for the deterministic part: the Gauss-kernel
// convolution (4 pi t)^(-1/2) * integral exp(-(x-y)^2/(4t)) h(y) dy, evaluated by
// adaptive Gauss-Kronrod quadrature to relative tolerance 1e-8. Valid far from
// boundaries (whole-line problem). The integration window comes from the data's
// effective support; data without one (other than constants) is rejected. t <= 0 is
// rejected.
double heat_oracle(const InitialData& h, double t, double x);

// Fraction of paths whose support interval stays inside A at every recorded time
// (empty slices count as inside). Rejects an empty list.
double support_containment_rate(std::span<const SupportProfile> profiles, Interval A);

}  // namespace spdelab
