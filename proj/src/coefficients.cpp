#include "spdelab/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

double signed_power(double C, double gamma, double u) {
    if (u == 0.0) return 0.0;
    const double au = std::abs(u);
    double mag;
    // The common exponents appear in per-cell inner loops; std::pow is several times
    // the cost of the specialized forms.
    if (gamma == 0.5) {
        mag = std::sqrt(au);
    } else if (gamma == 1.0) {
        mag = au;
    } else if (gamma == 0.0) {
        mag = 1.0;
    } else {
        mag = std::pow(au, gamma);
    }
    mag *= C;
    return u > 0.0 ? mag : -mag;
}

namespace {

void validate_power_params(const std::string& name, double C, double gamma) {
    if (C == 0.0) {
        throw std::invalid_argument("preset " + name +
                                    ": C must be nonzero (the ratio d/a is undefined everywhere)");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("preset " + name + ": gamma must lie in [0, 1]");
    }
}

CoefficientSpec power_law_base(const std::string& name, CoefficientKind kind, double C,
                               double gamma) {
    CoefficientSpec spec;
    spec.name = name;
    spec.kind = kind;
    spec.C = C;
    spec.gamma = gamma;
    spec.a = [C, gamma](double, double, double u) { return signed_power(C, gamma, u); };
    spec.b = [](double, double, double) { return 0.0; };
    spec.d = [](double, double, double) { return 0.0; };
    return spec;
}

}  // namespace

CoefficientSpec preset(const std::string& name, double C, double gamma) {
    validate_power_params(name, C, gamma);
    if (name == "heat-power") {
        return power_law_base(name, CoefficientKind::heat_power, C, gamma);
    }
    if (name == "allen-cahn") {
        auto spec = power_law_base(name, CoefficientKind::allen_cahn, C, gamma);
        spec.d = [](double, double, double u) { return 2.0 * u * (1.0 - u * u); };
        return spec;
    }
    if (name == "kpp") {
        auto spec = power_law_base(name, CoefficientKind::kpp, C, gamma);
        spec.d = [](double, double, double u) { return u * (1.0 - u); };
        return spec;
    }
    throw std::invalid_argument("unknown preset \"" + name +
                                "\" (expected heat-power, allen-cahn, or kpp)");
}

CoefficientSpec deterministic_heat() {
    CoefficientSpec spec;
    spec.name = "deterministic-heat";
    spec.kind = CoefficientKind::deterministic_heat;
    spec.a = [](double, double, double) { return 0.0; };
    spec.b = [](double, double, double) { return 0.0; };
    spec.d = [](double, double, double) { return 0.0; };
    return spec;
}

CoefficientSpec constant_coefficients(double a0, double d0) {
    CoefficientSpec spec;
    spec.name = "constant";
    spec.kind = CoefficientKind::constant;
    spec.a = [a0](double, double, double) { return a0; };
    spec.b = [](double, double, double) { return 0.0; };
    spec.d = [d0](double, double, double) { return d0; };
    return spec;
}

}  // namespace spdelab
