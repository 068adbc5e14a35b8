#ifndef UWOC_RNG_HPP
#define UWOC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "uwoc/special_functions.hpp"

namespace uwoc {

/// Seeded random source with explicitly pinned-down variate algorithms,
/// so a given seed reproduces the same stream on every platform and
/// standard library. Nothing here consults implementation-defined
/// std::*_distribution machinery.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via inverse-CDF transform.
    double normal() { return normal_quantile(uniform()); }

    double exponential(double mean) { return -mean * std::log(uniform()); }

    /// Gamma(shape, scale 1) by Marsaglia-Tsang squeeze, with the
    /// shape-boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return d * v;
            }
        }
    }

    /// Gamma variate with unit mean (shape a, scale 1/a).
    double gamma_unit_mean(double shape) { return gamma(shape) / shape; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace uwoc

#endif
