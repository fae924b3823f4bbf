#include "spdelab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spdelab/summation.hpp"

namespace spdelab {

SupportProfile support_profile(const FieldPath& path, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("support_profile: epsilon must be positive");
    }
    const auto& grid = path.grid;
    SupportProfile profile;
    profile.epsilon = epsilon;
    profile.x_left = grid.x_left;
    profile.dx = grid.dx;
    profile.slices.resize(grid.n_t + 1);

    // Outer 10% of the cells on each side (rounded up).
    const std::size_t margin = (grid.n_x + 9) / 10;
    bool have_union = false;

    for (std::size_t n = 0; n <= grid.n_t; ++n) {
        const auto slice = path.slice(n);
        std::size_t left = grid.n_x;
        std::size_t right = 0;
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            if (std::abs(slice[j]) > epsilon) {
                if (j < left) left = j;
                right = j;
            }
        }
        auto& s = profile.slices[n];
        if (left == grid.n_x) {
            s = {};  // empty slice
            continue;
        }
        s.empty = false;
        s.left = left;
        s.right = right;
        s.width = static_cast<double>(right - left + 1) * grid.dx;
        if (left < margin || right + margin >= grid.n_x) {
            profile.touched_boundary = true;
        }
        if (!have_union) {
            profile.union_support = s;
            have_union = true;
        } else {
            if (left < profile.union_support.left) profile.union_support.left = left;
            if (right > profile.union_support.right) profile.union_support.right = right;
        }
    }
    if (have_union) {
        profile.union_support.width =
            static_cast<double>(profile.union_support.right - profile.union_support.left + 1) *
            grid.dx;
    }
    return profile;
}

double integrability_functional(const FieldPath& path, double C, double gamma) {
    if (C == 0.0) {
        throw std::invalid_argument("integrability_functional: C must be nonzero");
    }
    const auto& grid = path.grid;
    const double exponent = 2.0 * (1.0 - gamma);
    KahanSum total;
    for (std::size_t n = 0; n < grid.n_t; ++n) {
        double step_sum = 0.0;
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double u = path.at(n, j);
            const double au = std::abs(u);
            double power;
            if (gamma == 1.0) {
                power = 1.0;  // |u|^0 with the 0^0 = 1 convention (dead zones count)
            } else if (gamma == 0.5) {
                power = au;
            } else {
                power = std::pow(au, exponent);
            }
            const double u2 = u * u;
            const double quartic = (u2 - 1.0) * (u2 - 1.0);  // u^4 - 2u^2 + 1
            step_sum += power * quartic;
        }
        total.add(step_sum);
    }
    return (4.0 / (C * C)) * total.value() * grid.dt * grid.dx;
}

double heat_oracle(const InitialData& h, double t, double x) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("heat_oracle: t must be positive");
    }
    double window_left;
    double window_right;
    if (h.effective_support) {
        window_left = h.effective_support->left;
        window_right = h.effective_support->right;
    } else if (h.name == "constant" || h.name.empty()) {
        // The Gauss kernel is a N(x, 2t) density; +-12 standard deviations hold all
        // of its mass to ~1e-32 relative.
        const double reach = 12.0 * std::sqrt(2.0 * t);
        window_left = x - reach;
        window_right = x + reach;
    } else {
        throw std::invalid_argument(
            "heat_oracle: initial data needs an effective support window (custom data "
            "must set effective_support)");
    }

    const double inv_4t = 1.0 / (4.0 * t);
    const auto integrand = [&](double y) {
        const double dxy = x - y;
        return std::exp(-dxy * dxy * inv_4t) * h.h(y);
    };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, window_left, window_right, 15, 1e-10);
    return integral / std::sqrt(4.0 * M_PI * t);
}

double support_containment_rate(std::span<const SupportProfile> profiles, Interval A) {
    if (profiles.empty()) {
        throw std::invalid_argument("support_containment_rate: empty profile list");
    }
    std::size_t inside_count = 0;
    for (const auto& profile : profiles) {
        bool inside = true;
        for (const auto& slice : profile.slices) {
            if (slice.empty) continue;
            const double lo = profile.x_left + static_cast<double>(slice.left) * profile.dx;
            const double hi = profile.x_left + static_cast<double>(slice.right + 1) * profile.dx;
            if (lo < A.left || hi > A.right) {
                inside = false;
                break;
            }
        }
        if (inside) ++inside_count;
    }
    return static_cast<double>(inside_count) / static_cast<double>(profiles.size());
}

}  // namespace spdelab
