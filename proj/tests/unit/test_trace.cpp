#include <doctest.h>

#include <cmath>

#include "uwoc/errors.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/trace.hpp"

using namespace uwoc;

TEST_CASE("normalize_trace divides by the mean") {
    const NormalizedTrace t = normalize_trace({{2.0, 4.0, 6.0}, 25000.0});
    REQUIRE(t.values.size() == 3);
    CHECK(t.values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.values[2] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(t.sample_rate == 25000.0);
    CHECK(t.is_unit_mean());
}

TEST_CASE("normalize_trace constant trace maps to all ones") {
    for (double c : {0.25, 1.0, 3370.0}) {
        const NormalizedTrace t = normalize_trace({{c, c, c, c}, 1000.0});
        for (double v : t.values) CHECK(v == 1.0);
    }
}

TEST_CASE("normalize_trace keeps zeros, mean one") {
    const NormalizedTrace t = normalize_trace({{0.0, 2.0}, 25000.0});
    CHECK(t.values[0] == 0.0);
    CHECK(t.values[1] == 2.0);
}

TEST_CASE("normalize_trace is idempotent and scale-invariant") {
    Rng rng(17);
    SampleTrace trace;
    trace.sample_rate = 25000.0;
    for (int i = 0; i < 4096; ++i) trace.samples.push_back(rng.exponential(3.7));

    const NormalizedTrace once = normalize_trace(trace);
    const NormalizedTrace twice = normalize_trace({once.values, once.sample_rate});
    for (std::size_t i = 0; i < once.values.size(); ++i) {
        CHECK(std::fabs(twice.values[i] - once.values[i]) <=
              1e-12 * (1.0 + std::fabs(once.values[i])));
    }

    SampleTrace scaled = trace;
    for (double& s : scaled.samples) s *= 41.5;
    const NormalizedTrace from_scaled = normalize_trace(scaled);
    for (std::size_t i = 0; i < once.values.size(); ++i) {
        CHECK(from_scaled.values[i] ==
              doctest::Approx(once.values[i]).epsilon(1e-13));
    }
}

TEST_CASE("normalize_trace rejects degenerate input") {
    CHECK_THROWS_AS(normalize_trace({{0.0, 0.0, 0.0}, 25000.0}), ZeroMeanTrace);
    CHECK_THROWS_AS(normalize_trace({{}, 25000.0}), InvalidInput);
    CHECK_THROWS_AS(normalize_trace({{1.0, -2.0}, 25000.0}), InvalidInput);
    CHECK_THROWS_AS(normalize_trace({{1.0, 2.0}, 0.0}), InvalidInput);
    CHECK_THROWS_AS(normalize_trace({{1.0, std::nan("")}, 25000.0}), InvalidInput);
}

TEST_CASE("trace_moment basics") {
    NormalizedTrace t{{0.0, 2.0}, 25000.0};
    CHECK(trace_moment(t, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(trace_moment(t, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(trace_moment(t, 0), InvalidInput);

    // Unit-mean invariant: first moment of any normalized trace is 1.
    Rng rng(3);
    SampleTrace raw;
    for (int i = 0; i < 100000; ++i) raw.samples.push_back(rng.exponential(0.8));
    const NormalizedTrace n = normalize_trace(raw);
    CHECK(trace_moment(n, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace_moment third moment of exponential draws near 3 factorial") {
    Rng rng(99);
    NormalizedTrace t;
    t.values.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) t.values.push_back(rng.exponential(1.0));
    CHECK(trace_moment(t, 3) == doctest::Approx(6.0).epsilon(0.05));
}
