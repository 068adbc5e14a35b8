#include "uwoc/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "uwoc/errors.hpp"
#include "uwoc/summation.hpp"

namespace uwoc {

void CovarianceCurve::validate() const {
    if (lags.empty() || lags.size() != coefficients.size()) {
        throw InvalidInput("covariance curve arrays are inconsistent");
    }
    if (lags.front() != 0.0 || coefficients.front() != 1.0) {
        throw InvalidInput("covariance curve must start at (0, 1)");
    }
    for (double b : coefficients) {
        if (!std::isfinite(b) || std::fabs(b) > 1.0 + 1e-9) {
            throw InvalidInput("covariance coefficient outside [-1, 1]");
        }
    }
}

double scintillation_index(const NormalizedTrace& trace) {
    trace.validate();
    if (trace.values.size() < 2) {
        throw TooFewSamples("scintillation index needs at least 2 samples");
    }
    KahanSum s1, s2;
    for (double v : trace.values) {
        s1.add(v);
        s2.add(v * v);
    }
    const double n = static_cast<double>(trace.values.size());
    const double m1 = s1.value() / n;
    const double m2 = s2.value() / n;
    return std::max(0.0, (m2 - m1 * m1) / (m1 * m1));
}

CovarianceCurve temporal_covariance(const NormalizedTrace& trace, double max_lag) {
    trace.validate();
    const std::size_t n = trace.values.size();
    if (n < 16) {
        throw TooFewSamples("temporal covariance needs at least 16 samples");
    }
    if (!(max_lag >= 0.0) || max_lag >= trace.duration()) {
        throw InvalidInput("max_lag must lie in [0, trace duration)");
    }
    const double dt = 1.0 / trace.sample_rate;
    std::size_t max_j = static_cast<std::size_t>(std::floor(max_lag / dt));
    max_j = std::min(max_j, n - 1);

    const double mean = compensated_mean(trace.values);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = trace.values[i] - mean;

    // C(j) with the 1/(N-j) divisor; C(0) first so b(0) is exactly 1.
    std::vector<double> cov(max_j + 1, 0.0);
    for (std::size_t j = 0; j <= max_j; ++j) {
        KahanSum acc;
        for (std::size_t i = 0; i + j < n; ++i) {
            acc.add(dev[i] * dev[i + j]);
        }
        cov[j] = acc.value() / static_cast<double>(n - j);
    }
    if (cov[0] <= 0.0) {
        throw ZeroVariance("constant trace: covariance coefficient undefined");
    }

    CovarianceCurve out;
    out.lags.resize(max_j + 1);
    out.coefficients.resize(max_j + 1);
    for (std::size_t j = 0; j <= max_j; ++j) {
        out.lags[j] = static_cast<double>(j) * dt;
        out.coefficients[j] = cov[j] / cov[0];
    }
    out.coefficients[0] = 1.0;
    out.validate();
    return out;
}

CoherenceTime coherence_time(const CovarianceCurve& curve, double threshold) {
    curve.validate();
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidInput("coherence threshold must lie in (0, 1)");
    }
    for (std::size_t i = 1; i < curve.coefficients.size(); ++i) {
        if (curve.coefficients[i] < threshold) {
            const double b0 = curve.coefficients[i - 1];
            const double b1 = curve.coefficients[i];
            const double t0 = curve.lags[i - 1];
            const double t1 = curve.lags[i];
            const double frac = (b0 - threshold) / (b0 - b1);
            return {t0 + frac * (t1 - t0), false};
        }
    }
    return {curve.lags.back(), true};
}

}  // namespace uwoc
