#include "spdelab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdelab/summation.hpp"

namespace spdelab {

double ratio(double t, double x, double u, const CoefficientSpec& spec) {
    const double a = spec.a(t, x, u);
    const double d = spec.d(t, x, u);
    if (a == 0.0) {
        if (d == 0.0) return 0.0;  // both presets have d(0) = 0 where a degenerates
        throw RatioUndefinedError(t, x, u);
    }
    return d / a;
}

std::vector<double> accumulate_quadratic(const FieldPath& path, const CoefficientSpec& spec) {
    const auto& grid = path.grid;
    const double cell_measure = grid.dt * grid.dx;
    std::vector<double> quad(grid.n_t + 1);
    quad[0] = 0.0;
    KahanSum running;
    for (std::size_t m = 0; m < grid.n_t; ++m) {
        const double t = grid.time(m);
        double step_sum = 0.0;
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double r = ratio(t, grid.cell_center(j), path.at(m, j), spec);
            step_sum += r * r;
        }
        running.add(step_sum * cell_measure);
        quad[m + 1] = running.value();
    }
    return quad;
}

std::size_t localization_time(std::span<const double> quad, double n) {
    if (n <= 0.0) return 0;  // immediate stop
    const auto it = std::lower_bound(quad.begin(), quad.end(), n);
    if (it == quad.end()) return quad.size() - 1;
    return static_cast<std::size_t>(it - quad.begin());
}

namespace {

void require_euler_path(const FieldPath& path) {
    if (path.scheme != StepScheme::euler_maruyama) {
        throw std::invalid_argument(
            "log_weight: the Girsanov weight is a functional of the Gaussian increments "
            "that drove the path; paths stepped with split_step_exact carry none");
    }
    if (!path.noise) {
        throw std::invalid_argument("log_weight: path carries no noise increments");
    }
}

}  // namespace

std::vector<TransferRecord> log_weight_schedule(const FieldPath& path,
                                                const CoefficientSpec& spec,
                                                std::span<const double> schedule) {
    require_euler_path(path);
    const auto& grid = path.grid;
    const auto& noise = *path.noise;
    const double cell_measure = grid.dt * grid.dx;

    // One pass builds both running sums; every level stops on them independently.
    std::vector<double> quad(grid.n_t + 1);
    std::vector<double> stochastic(grid.n_t + 1);
    quad[0] = 0.0;
    stochastic[0] = 0.0;
    KahanSum quad_running;
    KahanSum stochastic_running;
    for (std::size_t m = 0; m < grid.n_t; ++m) {
        const double t = grid.time(m);
        double step_quad = 0.0;
        double step_stochastic = 0.0;
        for (std::size_t j = 0; j < grid.n_x; ++j) {
            const double r = ratio(t, grid.cell_center(j), path.at(m, j), spec);
            step_quad += r * r;
            step_stochastic += r * noise.dW(m, j);
        }
        quad_running.add(step_quad * cell_measure);
        stochastic_running.add(step_stochastic);
        quad[m + 1] = quad_running.value();
        stochastic[m + 1] = stochastic_running.value();
    }

    std::vector<TransferRecord> records;
    records.reserve(schedule.size());
    for (const double n : schedule) {
        TransferRecord rec;
        rec.n = n;
        rec.tau_index = localization_time(quad, n);
        rec.log_xi = stochastic[rec.tau_index] - 0.5 * quad[rec.tau_index];
        rec.survived = quad[grid.n_t] < n;
        rec.quad = quad;
        records.push_back(std::move(rec));
    }
    return records;
}

TransferRecord log_weight(const FieldPath& path, const CoefficientSpec& spec, double n) {
    const double schedule[1] = {n};
    auto records = log_weight_schedule(path, spec, schedule);
    return std::move(records.front());
}

Expectation reweighted_expectation(std::span<const double> functional_values,
                                   std::span<const TransferRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("reweighted_expectation: empty ensemble");
    }
    if (functional_values.size() != records.size()) {
        throw std::invalid_argument(
            "reweighted_expectation: functional values and records differ in length");
    }
    const double level = records.front().n;
    for (const auto& rec : records) {
        if (rec.n != level) {
            throw std::invalid_argument(
                "reweighted_expectation: records mix localization levels");
        }
    }

    // Log-domain safety: exponentiate only after subtracting the maximum survivor
    // log-weight, then restore the scale on the way out.
    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
        if (rec.survived && rec.log_xi > max_log) max_log = rec.log_xi;
    }
    const std::size_t count = records.size();
    if (!std::isfinite(max_log)) {
        return {0.0, 0.0, 0.0};  // no survivors: every weighted term is exactly zero
    }

    KahanSum sum_w;
    KahanSum sum_w2;
    KahanSum sum_g;
    KahanSum sum_g2;
    for (std::size_t k = 0; k < count; ++k) {
        const auto& rec = records[k];
        const double w = rec.survived ? std::exp(rec.log_xi - max_log) : 0.0;
        const double g = functional_values[k] * w;
        sum_w.add(w);
        sum_w2.add(w * w);
        sum_g.add(g);
        sum_g2.add(g * g);
    }

    const double scale = std::exp(max_log);
    const double n_d = static_cast<double>(count);
    Expectation result;
    result.estimate = scale * (sum_g.value() / n_d);
    if (count > 1) {
        double variance = (sum_g2.value() - sum_g.value() * sum_g.value() / n_d) / (n_d - 1.0);
        if (variance < 0.0) variance = 0.0;
        result.standard_error = scale * std::sqrt(variance / n_d);
    } else {
        result.standard_error = 0.0;
    }
    result.ess = sum_w2.value() > 0.0 ? sum_w.value() * sum_w.value() / sum_w2.value() : 0.0;
    return result;
}

Expectation reweighted_expectation(
    const std::function<double(const FieldPath&)>& functional,
    const std::vector<std::pair<FieldPath, TransferRecord>>& ensemble) {
    std::vector<double> values;
    std::vector<TransferRecord> records;
    values.reserve(ensemble.size());
    records.reserve(ensemble.size());
    for (const auto& [path, record] : ensemble) {
        values.push_back(functional(path));
        records.push_back(record);
    }
    return reweighted_expectation(values, records);
}

}  // namespace spdelab
