#pragma once

#include <functional>
#include <string>

namespace spdelab {

// How a CoefficientSpec was constructed. Power-law kinds carry meaningful (C, gamma);
// solvers and the measure-transfer layer use the kind to validate scheme choices.
enum class CoefficientKind {
    custom,
    heat_power,   // a = C*sign(u)*|u|^gamma, b = 0, d = 0
    allen_cahn,   // a as heat_power, b = 0, d = 2u(1-u^2)
    kpp,          // a as heat_power, b = 0, d = u(1-u)
    deterministic_heat,  // a = b = d = 0 (plain heat equation)
    constant,     // a = a0, b = 0, d = d0 (classical SDE reductions)
};

// The coefficient triple of the SPDE pair: du = (u_xx + b + [d]) dt + a dW. The pair
// is (b) versus (b + d); solvers include d on demand so the same spec describes both.
struct CoefficientSpec {
    std::function<double(double t, double x, double u)> a;
    std::function<double(double t, double x, double u)> b;
    std::function<double(double t, double x, double u)> d;
    std::string name;
    CoefficientKind kind = CoefficientKind::custom;
    double C = 0.0;
    double gamma = 0.0;
};

// The three named presets: "heat-power", "allen-cahn", "kpp". All share the signed
// power-law diffusion coefficient a(u) = C*sign(u)*|u|^gamma (odd in u, degenerate at
// u = 0, total for every real u). Preconditions: C != 0, 0 <= gamma <= 1.
CoefficientSpec preset(const std::string& name, double C, double gamma);

// a = b = d = 0: the deterministic heat equation, used for oracle comparisons.
CoefficientSpec deterministic_heat();

// Constant coefficients a = a0, d = d0 (b = 0): classical SDE reductions and
// degenerate-ratio edge cases in tests.
CoefficientSpec constant_coefficients(double a0, double d0);

// C*sign(u)*|u|^gamma with sign(0) = 0, so the coefficient vanishes at u = 0 for
// every gamma (including gamma = 0, where copysign would not).
double signed_power(double C, double gamma, double u);

}  // namespace spdelab
