#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suprec/errors.hpp"
#include "suprec/report.hpp"

using namespace suprec;

TEST_CASE("format_double") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    // shortest round-trip form
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(1e300).find(',') == std::string::npos);
}

TEST_CASE("csv header and rendering are stable") {
    CHECK(std::string(kSweepCsvHeader) ==
          "m,n,rate_bits,c_w_bits,pe,ci_lo,ci_hi,trials,refusals,decoder,seed");

    SweepResult res;
    SweepRow row;
    row.m = 64;
    row.n = 18;
    row.rate_bits = 6.0 / 18.0;
    row.c_w_bits = 0.5;
    row.pe = 0.25;
    row.ci_lo = 0.2;
    row.ci_hi = 0.3;
    row.trials = 500;
    row.refusals = 0;
    row.decoder = "distance_k1";
    row.seed = 42;
    res.rows = {row};
    const std::string csv = to_csv(res);
    CHECK(csv == to_csv(res));
    CHECK(csv.substr(0, csv.find('\n')) == kSweepCsvHeader);
    CHECK(csv.find("64,18,") != std::string::npos);
    CHECK(csv.find("distance_k1,42\n") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("sweep spec round trip") {
    const std::string text = R"({
        "seed": 77,
        "trials": 25,
        "decoder": "distance_k1",
        "w": [1.0],
        "sigma_a2": 1.0,
        "sigma_z2": 1.0,
        "noise": "gaussian",
        "m_values": [64, 256],
        "rate": 0.35
    })";
    const SweepSpec spec = parse_sweep_spec(text);
    CHECK(spec.base.seed == 77);
    CHECK(spec.trials == 25);
    REQUIRE(spec.points.size() == 2);
    CHECK(spec.points[0].n == 18);
    CHECK(spec.points[1].n == 23);
    CHECK(spec.base.params.epsilon == doctest::Approx(0.1));

    // resolved spec re-parses to the same expansion
    const SweepSpec again = parse_sweep_spec(sweep_spec_json(spec));
    CHECK(again.points.size() == spec.points.size());
    CHECK(again.points[1].m == 256);
    CHECK(again.base.seed == 77);
}

TEST_CASE("manifest round trip") {
    SweepSpec spec = parse_sweep_spec(
        R"({"seed": 3, "trials": 2, "decoder": "ml", "w": [1.0, 2.0],
            "points": [{"m": 16, "n": 8}]})");
    const std::string manifest = make_manifest("sweep", spec, "flag", "2026-01-01T00:00:00Z");
    CHECK(manifest.find("\"seed_source\": \"flag\"") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);

    const SweepSpec back = spec_from_manifest(manifest);
    CHECK(back.base.seed == 3);
    CHECK(back.trials == 2);
    REQUIRE(back.points.size() == 1);
    CHECK(back.points[0].m == 16);
    CHECK(back.base.decoder == DecoderKind::ml);
    REQUIRE(back.base.w.has_value());
    CHECK(back.base.w->w[1] == 2.0);
}

TEST_CASE("activity specs parse") {
    const SweepSpec spec = parse_sweep_spec(
        R"({"seed": 1, "trials": 5, "decoder": "distance_k1",
            "activity": {"kind": "uniform_iid", "k": 1, "lo": 0.5, "hi": 1.5},
            "points": [{"m": 32, "n": 12}]})");
    REQUIRE(spec.base.activity.has_value());
    CHECK(spec.base.activity->lo == 0.5);
    CHECK(spec.base.model.k == 1);
}

TEST_CASE("spec errors are ConfigError") {
    CHECK_THROWS_AS(parse_sweep_spec("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"seed": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"w": [1], "activity": {"kind": "uniform_iid",
        "k": 1, "lo": 1, "hi": 2}, "points": [{"m": 4, "n": 2}]})"),
                    ConfigError);
    CHECK_THROWS_AS(spec_from_manifest(R"({"command": "sweep"})"), ConfigError);
}

TEST_CASE("text file round trip") {
    const std::string path = "report_test_tmp.txt";
    write_text_file(path, "a\nb\n");
    CHECK(read_text_file(path) == "a\nb\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("does_not_exist_857291.json"), ConfigError);
}
