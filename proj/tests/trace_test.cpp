#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace sigdiag;

TEST_CASE("csv ingestion of a recorded fragment") {
  Trace trace = testutil::load_trace("beta_rho.csv");
  CHECK(trace.size() == 8);
  CHECK(trace.t_initial() == 0.0);
  CHECK(trace.t_end() == 6.0);
  CHECK(trace.recording_interval() == 6.0);
  // record r3
  CHECK(trace.value(2, "beta") == 55.0);
  CHECK(trace.value(2, "rho") == 125.0);
  CHECK(trace.timestamp(2) == 0.9);
}

TEST_CASE("single-record trace has a zero recording interval") {
  Trace trace = parse_csv("timestamp,s\n0.0,1.5\n");
  CHECK(trace.size() == 1);
  CHECK(trace.recording_interval() == 0.0);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_WITH_AS(parse_csv("timestamp,s\n2.0,1\n1.0,2\n"),
                       doctest::Contains("non-monotone"), TraceError);
  CHECK_THROWS_WITH_AS(parse_csv("timestamp,s\n1.0,1\n1.0,2\n"),
                       doctest::Contains("duplicate"), TraceError);
  CHECK_THROWS_WITH_AS(parse_csv("timestamp,s\n1.0,abc\n"),
                       doctest::Contains("non-numeric"), TraceError);
  CHECK_THROWS_AS(parse_csv(""), TraceError);
  CHECK_THROWS_AS(parse_csv("time,s\n0,1\n"), TraceError);
}

TEST_CASE("prepare projects onto the used variables") {
  Trace trace = parse_csv(
      "timestamp,beta,rho,gamma\n"
      "0,1,10,100\n"
      "1,,11,\n"
      "2,3,,102\n"
      "3,,,103\n");
  Trace prepared = prepare(trace, {"beta"});
  CHECK(prepared.size() == 2);  // rows at t=1 and t=3 carry no beta value
  CHECK(prepared.variables() == std::vector<std::string>{"beta"});
  for (size_t i = 0; i < prepared.size(); ++i)
    CHECK(prepared.has_value(i, "beta"));
  CHECK_FALSE(prepared.has_variable("rho"));
}

TEST_CASE("interpolation policies") {
  Trace trace = parse_csv(
      "timestamp,beta,aux\n"
      "0,0,1\n"
      "1,,1\n"
      "2,4,1\n");
  SUBCASE("linear midpoint") {
    Trace p = prepare(trace, {"beta", "aux"}, InterpolationPolicy::linear);
    CHECK(signal_value(p, "beta", 1.0) == 2.0);
  }
  SUBCASE("previous value holds the last sample") {
    Trace p = prepare(trace, {"beta", "aux"},
                      InterpolationPolicy::previous_value);
    CHECK(signal_value(p, "beta", 1.0) == 0.0);
  }
  SUBCASE("nearest picks the earlier sample on ties") {
    Trace p = prepare(trace, {"beta", "aux"}, InterpolationPolicy::nearest);
    CHECK(signal_value(p, "beta", 1.0) == 0.0);
  }
  SUBCASE("per-variable override") {
    Trace p = prepare(trace, {"beta", "aux"}, InterpolationPolicy::linear,
                      {{"beta", InterpolationPolicy::previous_value}});
    CHECK(signal_value(p, "beta", 1.0) == 0.0);
  }
}

TEST_CASE("prepare error paths") {
  Trace trace = parse_csv(
      "timestamp,a,b\n"
      "0,1,\n"
      "1,2,\n");
  CHECK_THROWS_AS(prepare(trace, {"b"}), TraceError);   // zero defined samples
  CHECK_THROWS_AS(prepare(trace, {"c"}), TraceError);   // unknown variable
  Trace one = parse_csv(
      "timestamp,a,b\n"
      "0,1,5\n"
      "1,2,\n");
  CHECK_THROWS_AS(prepare(one, {"a", "b"}, InterpolationPolicy::linear),
                  TraceError);  // single defined sample, gaps remain
  CHECK_NOTHROW(prepare(one, {"a", "b"}, InterpolationPolicy::previous_value));
}

TEST_CASE("prepare is idempotent") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    Trace trace = random_trace(rng);
    Trace once = prepare(trace, {"s"});
    Trace twice = prepare(once, {"s"});
    CHECK(serialize_csv(once) == serialize_csv(twice));
  }
}

TEST_CASE("serialize then parse is the identity on prepared traces") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    Trace trace = prepare(random_trace(rng), {"s"});
    Trace back = parse_csv(serialize_csv(trace));
    REQUIRE(back.size() == trace.size());
    for (size_t i = 0; i < trace.size(); ++i) {
      CHECK(back.timestamp(i) == trace.timestamp(i));
      CHECK(back.value(i, "s") == trace.value(i, "s"));
    }
  }
}

TEST_CASE("signal_value") {
  Trace trace = prepare(testutil::load_trace("beta_rho.csv"), {"beta", "rho"});
  CHECK(signal_value(trace, "beta", 4.9) == 203.5);
  CHECK_THROWS_AS(signal_value(trace, "beta", 4.0), TraceError);
  CHECK_THROWS_AS(signal_value(trace, "nope", 4.9), TraceError);
  // constant expression
  CHECK(signal_value(trace, *SignalExpr::constant(100), 1.8) == 100.0);
  // arithmetic over two variables: beta - rho at t=0
  auto expr = SignalExpr::binary('-', SignalExpr::variable("beta"),
                                 SignalExpr::variable("rho"));
  CHECK(signal_value(trace, *expr, 0.0) == 1.0);
}
