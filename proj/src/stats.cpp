#include "spdelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spdelab/rng.hpp"
#include "spdelab/summation.hpp"

namespace spdelab {

void validate_sample(const WeightedSample& sample) {
    if (sample.values.size() != sample.weights.size()) {
        throw std::invalid_argument("weighted sample: values and weights differ in length");
    }
    if (sample.values.empty()) {
        throw std::invalid_argument("weighted sample: empty");
    }
    bool any_positive = false;
    for (const double w : sample.weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw std::invalid_argument("weighted sample: weights must be finite and nonnegative");
        }
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) {
        throw std::invalid_argument("weighted sample: all weights are zero");
    }
}

double weighted_ecdf(const WeightedSample& sample, double q) {
    validate_sample(sample);
    KahanSum below;
    KahanSum total;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        total.add(sample.weights[i]);
        if (sample.values[i] <= q) below.add(sample.weights[i]);
    }
    return below.value() / total.value();
}

namespace {

// KS distance over presorted pooled entries. membership[i] true means entry i (in
// pooled-id space) currently belongs to sample A. Entries at equal values are folded
// into both ECDFs before the gap is measured (right-continuity at ties).
double ks_distance(const std::vector<std::size_t>& sorted_ids,
                   const std::vector<double>& pooled_values,
                   const std::vector<double>& pooled_weights,
                   const std::vector<char>& membership, double total_a, double total_b) {
    double cum_a = 0.0;
    double cum_b = 0.0;
    double best = 0.0;
    const std::size_t n = sorted_ids.size();
    std::size_t i = 0;
    while (i < n) {
        const double v = pooled_values[sorted_ids[i]];
        while (i < n && pooled_values[sorted_ids[i]] == v) {
            const std::size_t id = sorted_ids[i];
            if (membership[id]) {
                cum_a += pooled_weights[id];
            } else {
                cum_b += pooled_weights[id];
            }
            ++i;
        }
        const double gap = std::abs(cum_a / total_a - cum_b / total_b);
        if (gap > best) best = gap;
    }
    return best;
}

}  // namespace

KsResult ks_weighted(const WeightedSample& a, const WeightedSample& b,
                     std::size_t n_permutations, std::uint64_t seed) {
    validate_sample(a);
    validate_sample(b);
    if (n_permutations < 100) {
        throw std::invalid_argument(
            "ks_weighted: need at least 100 permutations for p-value resolution");
    }

    const std::size_t n_a = a.values.size();
    const std::size_t n_b = b.values.size();
    const std::size_t n = n_a + n_b;
    std::vector<double> values(n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n_a; ++i) {
        values[i] = a.values[i];
        weights[i] = a.weights[i];
    }
    for (std::size_t i = 0; i < n_b; ++i) {
        values[n_a + i] = b.values[i];
        weights[n_a + i] = b.weights[i];
    }

    std::vector<std::size_t> sorted_ids(n);
    std::iota(sorted_ids.begin(), sorted_ids.end(), std::size_t{0});
    std::stable_sort(sorted_ids.begin(), sorted_ids.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return values[lhs] < values[rhs]; });

    std::vector<char> membership(n, 0);
    double total_a = 0.0;
    double total_b = 0.0;
    for (std::size_t i = 0; i < n_a; ++i) {
        membership[i] = 1;
        total_a += weights[i];
    }
    for (std::size_t i = n_a; i < n; ++i) total_b += weights[i];

    const double observed =
        ks_distance(sorted_ids, values, weights, membership, total_a, total_b);

    // Weight-respecting permutation null: (value, weight) pairs are reassigned between
    // the labels; weights travel with their values, and the per-label totals are
    // recomputed each draw.
    std::vector<std::size_t> assignment(n);
    std::size_t at_least_as_large = 0;
    for (std::size_t perm = 0; perm < n_permutations; ++perm) {
        rng::CounterStream stream(rng::derive_seed(seed, rng::kTagPermutation, perm), 0u, 0u);
        std::iota(assignment.begin(), assignment.end(), std::size_t{0});
        std::fill(membership.begin(), membership.end(), 0);
        double perm_total_a = 0.0;
        for (std::size_t i = 0; i < n_a; ++i) {
            const std::size_t remaining = n - i;
            const auto offset =
                static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(remaining));
            const std::size_t pick = i + std::min(offset, remaining - 1);
            std::swap(assignment[i], assignment[pick]);
            membership[assignment[i]] = 1;
            perm_total_a += weights[assignment[i]];
        }
        const double perm_total_b = (total_a + total_b) - perm_total_a;
        if (perm_total_a <= 0.0 || perm_total_b <= 0.0) {
            // A label drew only zero-weight pairs; its ECDF is undefined. Count the
            // draw as extreme (conservative).
            ++at_least_as_large;
            continue;
        }
        const double d =
            ks_distance(sorted_ids, values, weights, membership, perm_total_a, perm_total_b);
        if (d >= observed) ++at_least_as_large;
    }

    KsResult result;
    result.statistic = observed;
    result.p_value = static_cast<double>(1 + at_least_as_large) /
                     static_cast<double>(n_permutations + 1);
    return result;
}

double ess(std::span<const double> weights, bool& all_zero_warning) {
    if (weights.empty()) {
        throw std::invalid_argument("ess: empty weight list");
    }
    KahanSum sum;
    KahanSum sum_sq;
    for (const double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw std::invalid_argument("ess: weights must be finite and nonnegative");
        }
        sum.add(w);
        sum_sq.add(w * w);
    }
    if (sum_sq.value() == 0.0) {
        all_zero_warning = true;
        return 0.0;
    }
    all_zero_warning = false;
    return sum.value() * sum.value() / sum_sq.value();
}

double ess(std::span<const double> weights) {
    bool ignored = false;
    return ess(weights, ignored);
}

double weighted_mean(const WeightedSample& sample) {
    validate_sample(sample);
    KahanSum num;
    KahanSum den;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        num.add(sample.values[i] * sample.weights[i]);
        den.add(sample.weights[i]);
    }
    return num.value() / den.value();
}

namespace {

double quantile_of_sorted_pairs(const std::vector<std::pair<double, double>>& pairs, double p) {
    double total = 0.0;
    for (const auto& [v, w] : pairs) total += w;
    const double target = std::clamp(p, 0.0, 1.0) * total;
    double cum = 0.0;
    for (const auto& [v, w] : pairs) {
        cum += w;
        if (cum > 0.0 && cum >= target) return v;
    }
    return pairs.back().first;
}

}  // namespace

double weighted_quantile(const WeightedSample& sample, double p) {
    validate_sample(sample);
    std::vector<std::pair<double, double>> pairs(sample.values.size());
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        pairs[i] = {sample.values[i], sample.weights[i]};
    }
    std::sort(pairs.begin(), pairs.end());
    return quantile_of_sorted_pairs(pairs, p);
}

CiResult bootstrap_ci(const WeightedSample& sample, BootStatistic statistic,
                      std::size_t n_boot, double level, std::uint64_t seed) {
    validate_sample(sample);
    if (n_boot < 200) {
        throw std::invalid_argument("bootstrap_ci: need at least 200 replicates");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("bootstrap_ci: level must lie strictly inside (0, 1)");
    }

    // Degenerate sample: a single distinct value among the positively weighted points.
    bool first = true;
    double distinct = 0.0;
    bool degenerate = true;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        if (sample.weights[i] <= 0.0) continue;
        if (first) {
            distinct = sample.values[i];
            first = false;
        } else if (sample.values[i] != distinct) {
            degenerate = false;
            break;
        }
    }
    if (degenerate) {
        return {distinct, distinct, true};
    }

    const std::size_t n = sample.values.size();
    std::vector<double> replicates(n_boot);
    std::vector<std::pair<double, double>> resample(n);
    rng::CounterStream stream(rng::derive_seed(seed, rng::kTagBootstrap, 0), 0u, 0u);
    for (std::size_t b = 0; b < n_boot; ++b) {
        double total_w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto pick = static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(n));
            if (pick >= n) pick = n - 1;
            resample[i] = {sample.values[pick], sample.weights[pick]};
            total_w += sample.weights[pick];
        }
        double stat;
        if (total_w <= 0.0) {
            // The resample picked only zero-weight points; fall back to the unweighted
            // statistic of the drawn values so the replicate stays defined.
            for (auto& pr : resample) pr.second = 1.0;
        }
        if (statistic.kind == BootStatistic::Kind::mean) {
            KahanSum num;
            KahanSum den;
            for (const auto& [v, w] : resample) {
                num.add(v * w);
                den.add(w);
            }
            stat = num.value() / den.value();
        } else {
            std::sort(resample.begin(), resample.end());
            stat = quantile_of_sorted_pairs(resample, statistic.p);
        }
        replicates[b] = stat;
    }
    std::sort(replicates.begin(), replicates.end());

    const auto rank = [&](double q) -> double {
        auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n_boot)));
        if (idx > 0) --idx;
        if (idx >= n_boot) idx = n_boot - 1;
        return replicates[idx];
    };
    const double alpha = (1.0 - level) / 2.0;
    return {rank(alpha), rank(1.0 - alpha), false};
}

SignTestResult sign_test_counts(std::size_t wins, std::size_t losses) {
    SignTestResult result;
    result.wins = wins;
    result.losses = losses;
    result.ties = 0;
    const std::size_t m = wins + losses;
    if (wins == 0) {
        result.p_value = 1.0;  // the tail is the whole space, no arithmetic needed
        return result;
    }
    // One-sided exact binomial tail P[Bin(m, 1/2) >= wins], in the log domain.
    const double md = static_cast<double>(m);
    KahanSum tail;
    for (std::size_t k = wins; k <= m; ++k) {
        const double kd = static_cast<double>(k);
        const double log_term = std::lgamma(md + 1.0) - std::lgamma(kd + 1.0) -
                                std::lgamma(md - kd + 1.0) - md * std::log(2.0);
        tail.add(std::exp(log_term));
    }
    result.p_value = std::min(1.0, tail.value());
    return result;
}

SignTestResult paired_sign_test(std::span<const double> first, std::span<const double> second) {
    if (first.size() != second.size()) {
        throw std::invalid_argument("paired_sign_test: samples differ in length");
    }
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i] < second[i]) {
            ++wins;
        } else if (first[i] > second[i]) {
            ++losses;
        } else {
            ++ties;
        }
    }
    SignTestResult result = sign_test_counts(wins, losses);
    result.ties = ties;
    return result;
}

}  // namespace spdelab
