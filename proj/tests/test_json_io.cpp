#include <doctest.h>

#include "rnderiv/diagnose.hpp"
#include "rnderiv/json_io.hpp"
#include "support/gen.hpp"

using namespace rnderiv;
using nlohmann::json;

namespace {

std::string error_text(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("measure specs round-trip through JSON") {
    gen::Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        MeasureSpec m = gen::measure(rng, true);
        json j = measure_to_json(m);
        MeasureSpec back = measure_from_json(j, "spec");
        CHECK(measure_to_json(back) == j); // canonical serialization is stable
        CHECK(back.total() == m.total());
        Rat x = gen::rat01(rng, 27);
        CHECK(back.cdf(x).value == m.cdf(x).value);
    }
}

TEST_CASE("ingestion grammar") {
    MeasureSpec m = measure_from_text(
        R"({"sum":[{"atoms":[["1/3","1"],["1/2",2]]},
                   {"density":{"breakpoints":[0,"1/2",1],"coeffs":[["3/2"],["1/2","1"]]}},
                   {"cantor":"1/4"},
                   {"scale":["2",{"cantor":0}]}]})",
        "spec");
    CHECK(m.kind() == MeasureSpec::Kind::sum);
    // atoms 3, density 3/4 + 5/8, cantor 1/4, scaled zero
    CHECK(m.total() == Rat(3) + make_rat(11, 8) + make_rat(1, 4));
    CHECK(m.has_cantor());
}

TEST_CASE("validation errors name the offending path") {
    CHECK(error_text([] { measure_from_text("{nope", "f.json"); }).find("f.json") !=
          std::string::npos);
    CHECK(error_text([] {
              measure_from_text(R"({"atoms":[["2","1"]]})", "spec");
          }).find("atoms") != std::string::npos);
    CHECK(error_text([] {
              measure_from_text(R"({"atoms":[["1/2","0.5.5"]]})", "spec");
          }).find("atoms[0][1]") != std::string::npos);
    CHECK(error_text([] {
              measure_from_text(R"({"sum":[{"cantor":"-1"}]})", "spec");
          }).find("sum[0]") != std::string::npos);
    CHECK(error_text([] {
              measure_from_text(R"({"density":{"breakpoints":[0,1],"coeffs":[["-1"]]}})", "spec");
          }).find("density") != std::string::npos);
    // floats are not exact and are rejected outright
    CHECK(error_text([] { measure_from_text(R"({"cantor":0.25})", "spec"); }).find("rational") !=
          std::string::npos);
    CHECK_THROWS_AS(measure_from_text(R"({"atoms":[],"cantor":1})", "spec"), Error);
    CHECK_THROWS_AS(measure_from_text(R"({"wat":1})", "spec"), Error);
}

TEST_CASE("partitions and simple functions round-trip") {
    gen::Rng rng(19);
    for (int i = 0; i < 60; ++i) {
        Partition p = gen::scattered_partition(rng, 6, 4);
        Partition back = partition_from_json(partition_to_json(p), "partition");
        CHECK(back == p);

        std::vector<Rat> values;
        for (std::size_t c = 0; c < p.size(); ++c) values.push_back(gen::rat01(rng));
        SimpleFunction f(p, values);
        SimpleFunction fback = simple_function_from_json(simple_function_to_json(f), "fn");
        CHECK(fback.partition() == p);
        CHECK(fback.values() == values);
    }
}

TEST_CASE("non-canonical interval sets are rejected") {
    CHECK_THROWS_AS(interval_set_from_json(json::parse(R"([["1/2","1"],["0","1/4"]])"), "s"),
                    Error);
    CHECK_THROWS_AS(interval_set_from_json(json::parse(R"([["0","1/2"],["1/2","1"]])"), "s"),
                    Error); // touching pieces must be merged
    CHECK_THROWS_AS(interval_set_from_json(json::parse(R"([["1/2","1/2"]])"), "s"), Error);
    IntervalSet ok = interval_set_from_json(json::parse(R"([["0","1/4"],["1/2","1"]])"), "s");
    CHECK(ok.length() == make_rat(3, 4));
}

TEST_CASE("trace CSV round-trips and honors the stable-seconds flag") {
    RefinementTrace t;
    t.rows.push_back({0, 1, 1.2130613194252668, Rat(0), 0.001});
    t.rows.push_back({1, 2, 1.223413028047875, make_rat(1, 4), 0.002});
    std::string csv = trace_to_csv(t, false);
    std::vector<TraceRow> rows = trace_rows_from_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].a == t.rows[1].a); // %.17g survives the round trip
    CHECK(rows[1].l1_increment == make_rat(1, 4));

    std::string stable = trace_to_csv(t, true);
    CHECK(stable.find("0.001") == std::string::npos);
    CHECK(trace_to_csv(t, true) == stable); // byte-stable

    CHECK_THROWS_AS(trace_rows_from_csv("bogus"), Error);
}

TEST_CASE("trace JSON document round-trips and diagnoses clean") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    MeasureSpec nu = MeasureSpec::density({Rat(0), make_rat(1, 2), Rat(1)},
                                          {Poly{make_rat(3, 2)}, Poly{make_rat(1, 2)}});
    EngineConfig cfg;
    cfg.max_rounds = 10;
    cfg.checkpoint_stride = 1;
    EngineOutput out = run(nu, mu, cfg);

    json doc = trace_to_json(out, nu, mu, cfg, false);
    TraceDocument parsed = trace_from_json(doc);
    REQUIRE(parsed.trace.rows.size() == out.trace.rows.size());
    CHECK(parsed.trace.rows.back().a == out.trace.rows.back().a);
    CHECK(parsed.checkpoints.size() == out.checkpoints.size());
    REQUIRE(parsed.nu.has_value());

    DiagnoseReport report = diagnose_trace(parsed);
    CHECK(report.checkpoints_checked == parsed.checkpoints.size());
    CHECK(report.ui_identities_checked > 0);

    // tampering with the functional column trips the audit
    json bad = doc;
    bad["rounds"][1][2] = double(bad["rounds"][0][2]) - 0.25;
    CHECK_THROWS_AS(diagnose_trace(trace_from_json(bad)), Error);

    // tampering with a recorded density value trips the recomputation
    json bad2 = doc;
    bad2["checkpoints"][0]["f_mu"][0][1] = "9/5";
    CHECK_THROWS_AS(diagnose_trace(trace_from_json(bad2)), Error);

    CHECK_THROWS_AS(trace_from_json(json{{"format", "other"}}), Error);
}

TEST_CASE("decomposition report carries the headline fields") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    DecomposeConfig cfg;
    cfg.engine.max_rounds = 5;
    Decomposition d = decompose(mu, mu, cfg);
    json report = decomposition_report(d, "trace.csv");
    CHECK(report["singular_mass"] == "0");
    CHECK(report["residual"] == "0");
    CHECK(report["trace"] == "trace.csv");
    CHECK(report.contains("density"));
    CHECK(report["terminated_by"] == "gain_below_tolerance");
}
