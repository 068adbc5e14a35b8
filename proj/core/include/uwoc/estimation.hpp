#ifndef UWOC_ESTIMATION_HPP
#define UWOC_ESTIMATION_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "uwoc/trace.hpp"

namespace uwoc {

/// Normalized lagged covariance of irradiance at a single point.
/// lags start at 0 with step 1/sample_rate; coefficients[0] == 1.
struct CovarianceCurve {
    std::vector<double> lags;          // seconds
    std::vector<double> coefficients;  // dimensionless, b(0) = 1

    void validate() const;
};

/// Threshold crossing of a covariance curve. `saturated` marks curves
/// that never fall below the threshold within the measured lags.
struct CoherenceTime {
    double seconds = 0.0;
    bool saturated = false;
};

/// Per-trace summary statistics.
struct ChannelStats {
    double scint_index = 0.0;
    double mean_intensity = 0.0;  // pre-normalization mean, trace units
    std::size_t n_samples = 0;
    std::optional<double> coherence_time;  // seconds
    double coherence_threshold = 0.0;      // b-level defining coherence_time
    bool coherence_saturated = false;
};

/// Sample scintillation index (<I^2> - <I>^2) / <I>^2. Requires at
/// least two samples; never negative.
double scintillation_index(const NormalizedTrace& trace);

/// Lagged covariance coefficients b(j) = C(j)/C(0) with the 1/(N-j)
/// divisor and the global trace mean. Throws ZeroVariance for constant
/// traces; max_lag must be shorter than the trace.
CovarianceCurve temporal_covariance(const NormalizedTrace& trace, double max_lag);

/// First lag (linearly interpolated) where the curve falls below
/// `threshold`; the largest lag with the saturated flag if it never does.
CoherenceTime coherence_time(const CovarianceCurve& curve, double threshold);

}  // namespace uwoc

#endif
