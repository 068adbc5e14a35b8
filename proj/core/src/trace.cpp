#include "uwoc/trace.hpp"

#include <cmath>

#include "uwoc/errors.hpp"
#include "uwoc/summation.hpp"

namespace uwoc {

void SampleTrace::validate() const {
    if (samples.empty()) {
        throw InvalidInput("trace has no samples");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw InvalidInput("sample rate must be a positive finite number");
    }
    for (double s : samples) {
        if (!std::isfinite(s)) {
            throw InvalidInput("trace contains a non-finite sample");
        }
        if (s < 0.0) {
            throw InvalidInput("trace contains a negative sample");
        }
    }
}

void NormalizedTrace::validate() const {
    if (values.empty()) {
        throw InvalidInput("trace has no samples");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw InvalidInput("sample rate must be a positive finite number");
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput("normalized intensity must be finite and non-negative");
        }
    }
}

bool NormalizedTrace::is_unit_mean(double rel_tol) const {
    if (values.empty()) return false;
    return std::fabs(compensated_mean(values) - 1.0) <= rel_tol;
}

NormalizedTrace normalize_trace(const SampleTrace& trace) {
    trace.validate();
    const double mean = compensated_mean(trace.samples);
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw ZeroMeanTrace("trace mean is not a positive finite number; cannot normalize");
    }
    NormalizedTrace out;
    out.sample_rate = trace.sample_rate;
    out.values.reserve(trace.samples.size());
    for (double s : trace.samples) {
        out.values.push_back(s / mean);
    }
    return out;
}

double trace_moment(const NormalizedTrace& trace, int n) {
    if (n < 1) {
        throw InvalidInput("moment order must be >= 1");
    }
    if (trace.values.empty()) {
        throw InvalidInput("trace has no samples");
    }
    KahanSum acc;
    for (double v : trace.values) {
        acc.add(std::pow(v, n));
    }
    return acc.value() / static_cast<double>(trace.values.size());
}

}  // namespace uwoc
