#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spdelab {

// A functional of each ensemble path plus importance weights: exp(log_xi)*1{survived}
// for reweighted ensembles, all-ones for direct samples.
struct WeightedSample {
    std::vector<double> values;
    std::vector<double> weights;
    std::string label;
};

// Throws std::invalid_argument unless sizes match, weights are nonnegative, and at
// least one weight is positive.
void validate_sample(const WeightedSample& sample);

// Sum of weights at values <= q, normalized: nondecreasing, right-continuous, range
// [0, 1].
double weighted_ecdf(const WeightedSample& sample, double q);

struct KsResult {
    double statistic;  // sup over pooled values of |ECDF_a - ECDF_b|
    double p_value;    // permutation p-value: (1 + #{D' >= D}) / (n_permutations + 1)
};

// Weighted two-sample Kolmogorov-Smirnov statistic with a weight-respecting
// permutation null: (value, weight) pairs are pooled and randomly reassigned between
// the two labels, so the weights break no exchangeability the test relies on.
// Deterministic given seed. n_permutations < 100 is rejected (p-value resolution).
KsResult ks_weighted(const WeightedSample& a, const WeightedSample& b,
                     std::size_t n_permutations, std::uint64_t seed);

// Effective sample size (sum w)^2 / sum w^2. All-zero weights give 0 and set the
// warning flag on the two-argument overload.
double ess(std::span<const double> weights);
double ess(std::span<const double> weights, bool& all_zero_warning);

double weighted_mean(const WeightedSample& sample);

// Smallest sample value whose normalized cumulative weight reaches p.
double weighted_quantile(const WeightedSample& sample, double p);

// Statistic selector for bootstrap_ci.
struct BootStatistic {
    enum class Kind { mean, quantile } kind;
    double p = 0.5;  // quantile order when kind == quantile

    static BootStatistic Mean() { return {Kind::mean, 0.0}; }
    static BootStatistic Quantile(double p) { return {Kind::quantile, p}; }
};

struct CiResult {
    double lo;
    double hi;
    bool degenerate;  // single distinct value in the sample: zero-width interval
};

// Percentile bootstrap over weighted resamples: indices are resampled uniformly,
// (value, weight) pairs travel together, and the weighted statistic is recomputed per
// replicate. Deterministic given seed. Requires n_boot >= 200 and 0 < level < 1.
// Intervals at lower levels nest inside higher ones (same replicate set).
CiResult bootstrap_ci(const WeightedSample& sample, BootStatistic statistic,
                      std::size_t n_boot, double level, std::uint64_t seed);

struct SignTestResult {
    std::size_t wins;
    std::size_t losses;
    std::size_t ties;
    double p_value;  // one-sided exact binomial: P[Bin(wins+losses, 1/2) >= wins]
};

// Exact paired sign test for the one-sided hypothesis "first < second"; ties drop
// out. wins = #{first_i < second_i}.
SignTestResult paired_sign_test(std::span<const double> first, std::span<const double> second);

// Same tail probability from already-counted discordant pairs (e.g. paired boolean
// outcomes).
SignTestResult sign_test_counts(std::size_t wins, std::size_t losses);

}  // namespace spdelab
