#include <doctest.h>

#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/json_io.hpp"
#include "uwoc/trace_io.hpp"

using namespace uwoc;

TEST_CASE("single column with rate header") {
    std::istringstream in("# sample_rate=50000\n1.0\n2.5\n0.0\n");
    const auto contents = read_trace(in);
    CHECK(contents.trace.sample_rate == 50000.0);
    CHECK(contents.trace.samples == std::vector<double>{1.0, 2.5, 0.0});
}

TEST_CASE("single column defaults to 25 kSa/s") {
    std::istringstream in("3\n4\n5\n");
    CHECK(read_trace(in).trace.sample_rate == 25000.0);
}

TEST_CASE("two-column time,value infers the rate") {
    std::istringstream in("0.0,1.0\n0.001,2.0\n0.002,3.0\n0.003,2.0\n");
    const auto contents = read_trace(in);
    CHECK(contents.trace.sample_rate == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(contents.trace.samples.size() == 4);
}

TEST_CASE("non-uniform two-column spacing is rejected with a line number") {
    std::istringstream in("0.0,1.0\n0.001,2.0\n0.0025,3.0\n");
    try {
        read_trace(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("malformed rows carry line numbers") {
    std::istringstream in("1.0\n2.0\nbogus\n");
    try {
        read_trace(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream neg("1.0\n-2.0\n");
    CHECK_THROWS_AS(read_trace(neg), ParseError);
    std::istringstream empty("# sample_rate=100\n");
    CHECK_THROWS_AS(read_trace(empty), ParseError);
}

TEST_CASE("write/read round trip with provenance metadata") {
    std::ostringstream out;
    write_trace(out, {0.25, 1.5, 2.0}, 25000.0,
                {{"seed", "7"}, {"family", "k"}, {"coherence_time", "0.005"}});
    std::istringstream in(out.str());
    const auto contents = read_trace(in);
    CHECK(contents.trace.samples == std::vector<double>{0.25, 1.5, 2.0});
    CHECK(contents.trace.sample_rate == 25000.0);
    CHECK(contents.metadata.at("seed") == "7");
    CHECK(contents.metadata.at("family") == "k");
    CHECK(contents.metadata.at("coherence_time") == "0.005");
}

TEST_CASE("params JSON uses the exact field names") {
    const auto ln = params_to_json(LogNormalParams{0.05});
    CHECK(ln["family"] == "lognormal");
    CHECK(ln["params"]["sigma2_X"] == 0.05);

    const auto gg = params_to_json(GammaGammaParams{2.0, 1.5});
    CHECK(gg["family"] == "gamma_gamma");
    CHECK(gg["params"]["alpha"] == 2.0);
    CHECK(gg["params"]["beta"] == 1.5);

    const auto mix = params_to_json(ExpLogNormalParams{0.3, 0.5, -0.1, 0.2});
    CHECK(mix["family"] == "exp_lognormal");
    CHECK(mix["params"]["k"] == 0.3);
    CHECK(mix["params"]["gamma"] == 0.5);
    CHECK(mix["params"]["mu"] == -0.1);
    CHECK(mix["params"]["sigma2"] == 0.2);

    // Round trip through text is exact.
    for (const FadingParams& p :
         {FadingParams{KDistParams{3.25}}, FadingParams{LogNormalParams{1e-4}},
          FadingParams{ExpLogNormalParams{0.747, 0.01, -0.02, 1.76}}}) {
        const auto j = ordered_json::parse(params_to_json(p).dump());
        CHECK(params_from_json(j) == p);
    }
}

TEST_CASE("report CSV marks inapplicable families with dashes") {
    ReportRow ok;
    ok.family = Family::log_normal;
    FitResult r;
    r.family = Family::log_normal;
    r.params = LogNormalParams{0.1};
    r.rmse = 0.01;
    r.r_squared = 0.99;
    ok.result = r;

    ReportRow dash;
    dash.family = Family::k_dist;
    dash.applicable = false;
    dash.reason = "scintillation index <= 1";

    const std::string csv = report_to_csv({ok, dash});
    CHECK(csv.find("lognormal,0.99,0.01") != std::string::npos);
    CHECK(csv.find("k,---,---,---") != std::string::npos);
}
