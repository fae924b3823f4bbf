#pragma once

namespace spdelab {

// Kahan compensated accumulator: order-stable summation with O(eps) error
// independent of term count. Used wherever sums feed reproducible outputs or
// tight cross-checks.
class KahanSum {
public:
    void add(double x) {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace spdelab
