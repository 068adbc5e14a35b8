#ifndef UWOC_TRACE_HPP
#define UWOC_TRACE_HPP

#include <cstddef>
#include <vector>

namespace uwoc {

/// Sampling rate used by the measurement campaign this toolkit targets
/// (25 kSa/s) and assumed for trace files without a rate header.
inline constexpr double kDefaultSampleRate = 25000.0;

/// Raw photodetector samples in arbitrary linear units proportional to
/// received optical power, plus the rate they were acquired at.
struct SampleTrace {
    std::vector<double> samples;
    double sample_rate = kDefaultSampleRate;

    /// Throws InvalidInput unless samples are non-empty, finite,
    /// non-negative and the rate is positive.
    void validate() const;
};

/// Dimensionless intensity trace rescaled to unit mean. Produced by
/// normalize_trace (unit mean guaranteed) and by the fading generator
/// (unit mean in expectation only).
struct NormalizedTrace {
    std::vector<double> values;
    double sample_rate = kDefaultSampleRate;

    std::size_t size() const noexcept { return values.size(); }
    double duration() const noexcept {
        return static_cast<double>(values.size()) / sample_rate;
    }

    /// Structural checks only (finite, non-negative, positive rate).
    void validate() const;
    /// True when the arithmetic mean is 1 within `rel_tol`.
    bool is_unit_mean(double rel_tol = 1e-12) const;
};

/// Divides every sample by the trace mean. Scale-invariant and idempotent.
/// Throws ZeroMeanTrace when the mean is non-positive or not finite.
NormalizedTrace normalize_trace(const SampleTrace& trace);

/// n-th raw sample moment (1/N) * sum(values[i]^n), n >= 1.
double trace_moment(const NormalizedTrace& trace, int n);

}  // namespace uwoc

#endif
