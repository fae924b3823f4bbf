#pragma once

#include <functional>
#include <optional>
#include <string>

namespace spdelab {

struct Interval {
    double left;
    double right;
    double width() const { return right - left; }
};

// Initial data h for the SPDE: bounded continuous function plus an optional support
// interval. support_hint is set exactly when h vanishes outside a bounded interval
// (required by support-scan runs); effective_support additionally covers data such as
// Gaussians that decay below meaningful amplitude outside a finite window, and is what
// quadrature oracles use to place their integration window.
struct InitialData {
    std::function<double(double x)> h;
    std::optional<Interval> support_hint;
    std::optional<Interval> effective_support;
    std::string name;
};

// h = c everywhere.
InitialData constant_data(double c);

// h = amplitude * exp(-(x-center)^2 / (2 sigma^2)). Not compactly supported; its
// effective support is center +- 9 sigma.
InitialData gaussian_data(double center, double sigma, double amplitude);

// Smooth compactly supported bump: amplitude * exp(1 - 1/(1 - s^2)) with
// s = (x-center)/radius for |s| < 1, zero outside. Support = [center-radius,
// center+radius].
InitialData bump_data(double center, double radius, double amplitude);

// Plateau at `height` on [left+ramp, right-ramp] with smoothstep ramps inside
// [left, left+ramp] and [right-ramp, right]; zero outside [left, right].
// Requires right - left > 2*ramp and ramp > 0.
InitialData plateau_data(double left, double right, double ramp, double height);

}  // namespace spdelab
