#include "spdelab/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

InitialData constant_data(double c) {
    InitialData data;
    data.name = "constant";
    data.h = [c](double) { return c; };
    return data;
}

InitialData gaussian_data(double center, double sigma, double amplitude) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian initial data: sigma must be positive");
    }
    InitialData data;
    data.name = "gaussian";
    data.h = [center, sigma, amplitude](double x) {
        const double s = (x - center) / sigma;
        return amplitude * std::exp(-0.5 * s * s);
    };
    data.effective_support = Interval{center - 9.0 * sigma, center + 9.0 * sigma};
    return data;
}

InitialData bump_data(double center, double radius, double amplitude) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("bump initial data: radius must be positive");
    }
    InitialData data;
    data.name = "bump";
    data.h = [center, radius, amplitude](double x) {
        const double s = (x - center) / radius;
        const double s2 = s * s;
        if (s2 >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
    };
    data.support_hint = Interval{center - radius, center + radius};
    data.effective_support = data.support_hint;
    return data;
}

InitialData plateau_data(double left, double right, double ramp, double height) {
    if (!(ramp > 0.0)) {
        throw std::invalid_argument("plateau initial data: ramp must be positive");
    }
    if (!(right - left > 2.0 * ramp)) {
        throw std::invalid_argument(
            "plateau initial data: need right - left > 2*ramp for a flat top");
    }
    InitialData data;
    data.name = "plateau";
    data.h = [left, right, ramp, height](double x) {
        auto smoothstep = [](double s) {
            if (s <= 0.0) return 0.0;
            if (s >= 1.0) return 1.0;
            return s * s * (3.0 - 2.0 * s);
        };
        const double up = smoothstep((x - left) / ramp);
        const double down = smoothstep((right - x) / ramp);
        return height * up * down;
    };
    data.support_hint = Interval{left, right};
    data.effective_support = data.support_hint;
    return data;
}

}  // namespace spdelab
