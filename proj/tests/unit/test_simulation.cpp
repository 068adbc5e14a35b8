#include <doctest.h>

#include <cmath>

#include "uwoc/distributions.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/estimation.hpp"
#include "uwoc/simulation.hpp"
#include "uwoc/special_functions.hpp"
#include "uwoc/summation.hpp"

using namespace uwoc;

TEST_CASE("path loss") {
    CHECK(path_loss({0.3, 0.2, 0.0}) == 1.0);
    CHECK(path_loss({0.3, 0.2, 2.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    const double once = path_loss({0.1, 0.05, 7.0});
    const double twice = path_loss({0.1, 0.05, 14.0});
    CHECK(twice == doctest::Approx(once * once).epsilon(1e-14));
    CHECK_THROWS_AS(path_loss({-0.1, 0.0, 1.0}), InvalidInput);
}

TEST_CASE("received signal composition") {
    NormalizedTrace fading;
    fading.values = {0.5, 1.5, 1.0};
    const std::vector<double> transmit{1.0, 1.0, 1.0};
    const auto full = received_signal(transmit, fading, 1.0);
    CHECK(full == fading.values);
    const auto halved = received_signal(transmit, fading, 0.5);
    for (std::size_t i = 0; i < halved.size(); ++i) {
        CHECK(halved[i] == doctest::Approx(0.5 * full[i]).epsilon(1e-15));
    }
    CHECK_THROWS_AS(received_signal({transmit.data(), 2}, fading, 1.0), LengthMismatch);
    CHECK_THROWS_AS(received_signal(transmit, fading, 0.0), InvalidInput);
    CHECK_THROWS_AS(received_signal(transmit, fading, 1.5), InvalidInput);
}

TEST_CASE("received signal preserves the scintillation index") {
    const FadingProcessSpec spec{ExpLogNormalParams{0.4, 0.6, -0.1, 0.3}, 0.002,
                                 25000.0, 50000};
    const NormalizedTrace fading = generate_fading(spec, 404);
    const std::vector<double> transmit(fading.values.size(), 2.5);
    NormalizedTrace received;
    received.values = received_signal(transmit, fading, 0.25);
    received.sample_rate = fading.sample_rate;
    // Eq. (1)-style estimator is scale invariant.
    CHECK(std::fabs(scintillation_index(received) - scintillation_index(fading)) <
          1e-12);
}

TEST_CASE("generator determinism and seed separation") {
    const FadingProcessSpec spec{LogNormalParams{0.03}, 0.004, 25000.0, 4096};
    const auto a = generate_fading(spec, 7);
    const auto b = generate_fading(spec, 7);
    const auto c = generate_fading(spec, 8);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.sample_rate == 25000.0);
}

TEST_CASE("generator spec validation") {
    FadingProcessSpec spec{LogNormalParams{0.03}, 0.00004, 25000.0, 64};
    CHECK_NOTHROW(spec.validate());  // tau * rate = 1 boundary passes
    spec.coherence_time = 0.000036;  // tau * rate = 0.9
    CHECK_THROWS_AS(spec.validate(), UnresolvableCoherence);
    spec.coherence_time = 0.001;
    spec.count = 0;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
}

TEST_CASE("near-constant trace in the fully correlated limit") {
    const std::size_t n = 8192;
    const double rate = 25000.0;
    const FadingProcessSpec spec{LogNormalParams{0.05},
                                 1000.0 * static_cast<double>(n) / rate, rate, n};
    const auto t = generate_fading(spec, 21);
    double lo = t.values.front(), hi = t.values.front();
    for (double v : t.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // The latent walk drifts O(sqrt(N dt / tau0)), so the block is flat
    // to a few percent while an uncorrelated draw would span decades.
    CHECK((hi - lo) / hi < 0.05);
    NormalizedTrace iid;
    iid.values = sample(spec.marginal, n, 21);
    double iid_lo = iid.values.front(), iid_hi = iid.values.front();
    for (double v : iid.values) {
        iid_lo = std::min(iid_lo, v);
        iid_hi = std::max(iid_hi, v);
    }
    CHECK((hi - lo) / hi < 0.05 * (iid_hi - iid_lo) / iid_hi);
}

TEST_CASE("marginal recovery: scintillation and mean within sampling bounds") {
    const double s2x = 0.02;
    const FadingProcessSpec spec{LogNormalParams{s2x}, 0.005, 25000.0, 1000000};
    const NormalizedTrace t = generate_fading(spec, 1001);

    const double expected_scint = std::exp(4.0 * s2x) - 1.0;
    CHECK(scintillation_index(t) == doctest::Approx(expected_scint).epsilon(0.05));

    // Mean within 3 sigma with the AR(1) effective-sample-size correction.
    const double rho = std::exp(-1.0 / (25000.0 * 0.005));
    const double n_eff = static_cast<double>(t.values.size()) * (1.0 - rho) / (1.0 + rho);
    const double sd = std::sqrt(expected_scint / n_eff);
    KahanSum acc;
    for (double v : t.values) acc.add(v);
    const double mean = acc.value() / static_cast<double>(t.values.size());
    CHECK(std::fabs(mean - 1.0) < 3.0 * sd);
}

TEST_CASE("latent autocorrelation is AR(1) after mapping back") {
    const double tau0 = 0.005;
    const double rate = 25000.0;
    const FadingProcessSpec spec{ExpLogNormalParams{0.5, 0.7, -0.15, 0.3}, tau0, rate,
                                 500000};
    const NormalizedTrace t = generate_fading(spec, 3003);

    // z = Phi^-1(F(h)) recovers the latent series through the closed-form
    // mixture CDF; its correlation must decay as exp(-j dt / tau0).
    NormalizedTrace latent;
    latent.sample_rate = rate;
    latent.values.reserve(t.values.size());
    for (double v : t.values) {
        const double u = std::clamp(cdf(spec.marginal, v), 1e-12, 1.0 - 1e-12);
        latent.values.push_back(normal_quantile(u) + 10.0);  // shift to stay >= 0
    }
    const auto curve = temporal_covariance(latent, 30.5 / rate);
    for (std::size_t j = 1; j <= 30; j += 5) {
        const double expected = std::exp(-static_cast<double>(j) / (rate * tau0));
        CHECK(curve.coefficients[j] == doctest::Approx(expected).epsilon(0.03));
    }
}

TEST_CASE("generated marginals match the sampled law per family") {
    const std::vector<FadingParams> families = {
        LogNormalParams{0.1}, KDistParams{2.2}, GammaGammaParams{2.5, 1.1},
        ExpLogNormalParams{0.5, 0.5, 0.1, 0.2}};
    for (const auto& marginal : families) {
        const FadingProcessSpec spec{marginal, 0.002, 25000.0, 400000};
        const NormalizedTrace t = generate_fading(spec, 606);
        // Compare a few quantile levels of the empirical distribution.
        std::vector<double> sorted = t.values;
        std::sort(sorted.begin(), sorted.end());
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const double q = quantile(marginal, p);
            const double emp =
                sorted[static_cast<std::size_t>(p * (sorted.size() - 1))];
            // Correlated draws widen the CI; 4 sigma with ESS correction.
            const double rho = std::exp(-1.0 / (25000.0 * 0.002));
            const double n_eff = sorted.size() * (1.0 - rho) / (1.0 + rho);
            const double dens = pdf(marginal, q);
            const double sd = std::sqrt(p * (1.0 - p) / n_eff) / std::max(dens, 1e-12);
            CHECK(std::fabs(emp - q) < 4.0 * sd + 1e-6);
        }
    }
}

TEST_CASE("quantile table interpolant stays within 1e-6 of the true quantile") {
    const std::vector<FadingParams> families = {
        LogNormalParams{0.1}, ExpLogNormalParams{0.45, 0.6, -0.1, 0.25},
        KDistParams{1.8}, GammaGammaParams{3.0, 1.4}};
    for (const auto& marginal : families) {
        const QuantileTable table(marginal);
        // Probe between nodes, where interpolation error peaks.
        for (double z = -5.9971; z <= 6.0; z += 0.37) {
            const double truth = quantile(marginal, normal_cdf(z));
            const double got = table(z);
            CHECK(std::fabs(got - truth) <= 1e-6 * std::max(1.0, std::fabs(truth)));
        }
    }
}
