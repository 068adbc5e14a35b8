#ifndef UWOC_SUMMATION_HPP
#define UWOC_SUMMATION_HPP

#include <cmath>
#include <span>

namespace uwoc {

/// Neumaier compensated accumulator. Sequential and therefore bit-stable:
/// the same inputs in the same order always reduce to the same double.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline double compensated_mean(std::span<const double> xs) noexcept {
    if (xs.empty()) return 0.0;
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace uwoc

#endif
