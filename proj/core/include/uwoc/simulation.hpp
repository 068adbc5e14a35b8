#ifndef UWOC_SIMULATION_HPP
#define UWOC_SIMULATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "uwoc/distributions.hpp"
#include "uwoc/trace.hpp"

namespace uwoc {

/// Prescription for a synthetic fading process: marginal law, latent
/// 1/e decorrelation time, sampling grid and length.
struct FadingProcessSpec {
    FadingParams marginal;
    double coherence_time = 0.0;  // seconds, latent 1/e decorrelation
    double sample_rate = kDefaultSampleRate;
    std::size_t count = 0;

    void validate() const;  // throws UnresolvableCoherence / InvalidInput
};

/// Deterministic attenuation of the non-scattered component:
/// absorption a and scattering b per meter over distance d0.
struct PathLossSpec {
    double absorption = 0.0;
    double scattering = 0.0;
    double distance = 0.0;

    void validate() const;
};

/// Stationary Gaussian-copula fading series: AR(1) latent Gaussian with
/// lag-1 coefficient exp(-dt/coherence_time), mapped through the
/// marginal quantile function (cached as a monotone interpolant).
/// The output has the requested marginal law; its empirical mean is 1
/// only in expectation.
NormalizedTrace generate_fading(const FadingProcessSpec& spec, std::uint64_t seed);

/// exp(-(a+b) d0), in (0, 1].
double path_loss(const PathLossSpec& spec);

/// Element-wise transmit[i] * fading[i] * loss.
std::vector<double> received_signal(std::span<const double> transmit,
                                    const NormalizedTrace& fading, double loss);

/// Monotone cubic interpolant of the marginal quantile as a function of
/// the latent Gaussian coordinate z; built once per generated trace and
/// shareable across threads afterwards.
class QuantileTable {
public:
    explicit QuantileTable(const FadingParams& marginal, int nodes = 4096,
                           double z_max = 6.5);

    /// Fading value for latent coordinate z (clamped to the table range).
    double operator()(double z) const;

    double z_max() const { return z_max_; }

private:
    std::vector<double> values_;  // quantile at each z node
    std::vector<double> slopes_;  // PCHIP derivatives
    double z_max_;
    double step_;
};

}  // namespace uwoc

#endif
