#include "uwoc/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "uwoc/errors.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/special_functions.hpp"

namespace uwoc {

void FadingProcessSpec::validate() const {
    validate_params(marginal);
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw InvalidInput("sample rate must be positive and finite");
    }
    if (!(coherence_time > 0.0) || !std::isfinite(coherence_time)) {
        throw InvalidInput("coherence time must be positive and finite");
    }
    if (count < 1) {
        throw InvalidInput("sample count must be >= 1");
    }
    if (coherence_time * sample_rate < 1.0) {
        throw UnresolvableCoherence(
            "coherence_time * sample_rate < 1: process not resolvable at this grid");
    }
}

void PathLossSpec::validate() const {
    if (!(absorption >= 0.0) || !(scattering >= 0.0) || !(distance >= 0.0)) {
        throw InvalidInput("path loss parameters must be non-negative");
    }
}

namespace {

// Fritsch-Carlson monotone slopes on a uniform grid.
std::vector<double> pchip_slopes(const std::vector<double>& values, double step) {
    const std::size_t n = values.size();
    std::vector<double> secants(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        secants[i] = (values[i + 1] - values[i]) / step;
    }
    std::vector<double> slopes(n, 0.0);
    slopes.front() = secants.front();
    slopes.back() = secants.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (secants[i - 1] * secants[i] <= 0.0) {
            slopes[i] = 0.0;
        } else {
            // Harmonic mean keeps the interpolant monotone.
            slopes[i] =
                2.0 * secants[i - 1] * secants[i] / (secants[i - 1] + secants[i]);
        }
    }
    return slopes;
}

double pchip_eval(const std::vector<double>& values, const std::vector<double>& slopes,
                  double step, double pos) {
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= values.size() - 1) i = values.size() - 2;
    const double t = pos - static_cast<double>(i);
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * values[i] + h10 * step * slopes[i] + h01 * values[i + 1] +
           h11 * step * slopes[i + 1];
}

}  // namespace

QuantileTable::QuantileTable(const FadingParams& marginal, int nodes, double z_max)
    : z_max_(z_max) {
    if (nodes < 4) {
        throw InvalidInput("quantile table needs at least 4 nodes");
    }

    // The table stores ln(quantile) over z, which is nearly linear for
    // these marginals; nodes double until midpoint checks against the
    // exact quantile meet the 1e-6 sup-error target.
    int n = nodes;
    for (int round = 0; round < 4; ++round) {
        const std::size_t fine_n = 2 * static_cast<std::size_t>(n) - 1;
        const double fine_step = 2.0 * z_max_ / static_cast<double>(fine_n - 1);
        std::vector<double> probs(fine_n);
        for (std::size_t i = 0; i < fine_n; ++i) {
            probs[i] = normal_cdf(-z_max_ + fine_step * static_cast<double>(i));
        }
        std::vector<double> fine(fine_n);
        quantile_grid(marginal, probs, fine);
        for (double& v : fine) v = std::log(v);

        // Interpolate on the coarse (even-index) nodes and validate at
        // the held-out midpoints.
        std::vector<double> coarse(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) coarse[static_cast<std::size_t>(i)] = fine[2 * i];
        const double coarse_step = 2.0 * z_max_ / static_cast<double>(n - 1);
        const auto slopes = pchip_slopes(coarse, coarse_step);

        double max_err = 0.0;
        for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
            const double interp =
                pchip_eval(coarse, slopes, coarse_step, static_cast<double>(i) + 0.5);
            // |delta ln h| bounds the relative error of h.
            max_err = std::max(max_err, std::fabs(interp - fine[2 * i + 1]));
        }

        if (max_err <= 5e-7 || round == 3) {
            values_ = std::move(fine);
            step_ = fine_step;
            slopes_ = pchip_slopes(values_, step_);
            return;
        }
        n = static_cast<int>(fine_n);
    }
}

double QuantileTable::operator()(double z) const {
    const double zc = std::clamp(z, -z_max_, z_max_);
    const double pos = (zc + z_max_) / step_;
    return std::exp(pchip_eval(values_, slopes_, step_, pos));
}

NormalizedTrace generate_fading(const FadingProcessSpec& spec, std::uint64_t seed) {
    spec.validate();
    const QuantileTable table(spec.marginal);

    const double dt = 1.0 / spec.sample_rate;
    const double rho = std::exp(-dt / spec.coherence_time);
    const double innovation = std::sqrt(1.0 - rho * rho);

    NormalizedTrace out;
    out.sample_rate = spec.sample_rate;
    out.values.resize(spec.count);

    Rng rng(seed);
    double z = rng.normal();
    out.values[0] = table(z);
    for (std::size_t i = 1; i < spec.count; ++i) {
        z = rho * z + innovation * rng.normal();
        out.values[i] = table(z);
    }
    return out;
}

double path_loss(const PathLossSpec& spec) {
    spec.validate();
    return std::exp(-(spec.absorption + spec.scattering) * spec.distance);
}

std::vector<double> received_signal(std::span<const double> transmit,
                                    const NormalizedTrace& fading, double loss) {
    if (transmit.size() != fading.values.size()) {
        throw LengthMismatch("transmit and fading sequences differ in length");
    }
    if (!(loss > 0.0 && loss <= 1.0)) {
        throw InvalidInput("loss must lie in (0, 1]");
    }
    std::vector<double> out(transmit.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = transmit[i] * fading.values[i] * loss;
    }
    return out;
}

}  // namespace uwoc
