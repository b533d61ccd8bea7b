#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sigdiag/report.hpp"

using namespace sigdiag;

TEST_CASE("two-atom conjunction yields one entry per atom") {
  auto report = testutil::run_pair("rises_demo.csv", "rises_and_assert.prop");
  CHECK_FALSE(report.property_holds);
  REQUIRE(report.atoms.size() == 2);
  REQUIRE(report.atoms[0].diagnosis.has_value());
  REQUIRE(report.atoms[1].diagnosis.has_value());
  CHECK(to_string(report.atoms[0].diagnosis->cause) == "c_rises_3");
  CHECK(to_string(report.atoms[1].diagnosis->cause) == "c_assert_1");
}

TEST_CASE("satisfied property produces no diagnoses") {
  Trace trace = parse_csv("timestamp,s\n0,1\n1,1\n2,1\n");
  Property p = parse_property("globally assert s = 1");
  DiagnosisReport report = diagnose(trace, p);
  CHECK(report.property_holds);
  REQUIRE(report.atoms.size() == 1);
  CHECK(report.atoms[0].holds);
  CHECK_FALSE(report.atoms[0].diagnosis.has_value());
}

TEST_CASE("single-atom diagnoses from the worked examples") {
  SUBCASE("boundary violation") {
    auto report = testutil::run_pair("spike_demo.csv", "after_boundary_spike.prop");
    REQUIRE(report.atoms.size() == 1);
    REQUIRE(report.atoms[0].diagnosis.has_value());
    CHECK(to_string(report.atoms[0].diagnosis->cause) == "c_a_aft_1");
  }
  SUBCASE("negated atom") {
    auto report = testutil::run_pair("becomes_demo.csv", "not_becomes.prop");
    const auto& d = testutil::first_diagnosis(report);
    CHECK(to_string(d.cause) == "c_not_1");
    CHECK(d.id == "d_not_becomes");
    const auto& payload = std::get<RecordWithValues>(d.payload);
    CHECK(payload.t == 4.0);
    CHECK(payload.values.at("beta3") == 0.8);
  }
  SUBCASE("increasing signal under a spike property") {
    auto report = testutil::run_pair("spike_demo.csv", "spike_demo_b4.prop");
    const auto& d = testutil::first_diagnosis(report);
    CHECK(to_string(d.cause) == "c_spike_5");
    const auto& pair = std::get<RecordPairPayload>(d.payload);
    CHECK(pair.first == RecordRef{0.0, 30.0});
    CHECK(pair.second == RecordRef{6.0, 190.0});
  }
}

TEST_CASE("a violated atom can have no cataloged cause") {
  SUBCASE("oscillation with three extrema split by a plateau") {
    // No oscillation instance, not one or two extrema, not constant, not
    // monotone: every oscillation cause fails.
    Trace trace = parse_csv(
        "timestamp,s\n0,0\n1,5\n2,0\n3,3\n4,3\n5,5\n6,0\n");
    Property p = parse_property(
        "globally exist oscillation in s with p2pAmp < 2 period < 0.5");
    CHECK_FALSE(eval_property(trace, p).holds);
    DiagnosisReport report = diagnose(trace, p);
    REQUIRE(report.atoms.size() == 1);
    CHECK_FALSE(report.atoms[0].holds);
    CHECK_FALSE(report.atoms[0].diagnosis.has_value());
  }
  SUBCASE("becomes oscillating around the threshold") {
    // Starts satisfied, alternates across the constraint: no clean crossing,
    // yet none of the three becomes causes applies.
    Trace trace = parse_csv("timestamp,s\n0,3\n1,0\n2,3\n3,0\n");
    Property p = parse_property("globally s becomes > 2");
    CHECK_FALSE(eval_property(trace, p).holds);
    DiagnosisReport report = diagnose(trace, p);
    REQUIRE(report.atoms.size() == 1);
    CHECK_FALSE(report.atoms[0].holds);
    CHECK_FALSE(report.atoms[0].diagnosis.has_value());
  }
}

TEST_CASE("engine never diagnoses a satisfied atom") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 80; ++round) {
    Trace trace = random_trace(rng);
    Atom atom = random_atom(rng, trace);
    Property p;
    p.clauses.push_back(Clause{{atom}});
    DiagnosisReport report = diagnose(trace, p);
    REQUIRE(report.atoms.size() == 1);
    if (report.atoms[0].diagnosis) {
      CHECK_FALSE(report.atoms[0].holds);
      CHECK_FALSE(eval_atom(trace, atom).holds);
    }
  }
}

TEST_CASE("immediate deadline reports a timeout with no partial damage") {
  Trace trace = prepare(testutil::load_trace("rises_demo.csv"), {"beta3"});
  Property p = testutil::load_property("rises_and_assert.prop");
  RunConfig config;
  config.timeout = std::chrono::nanoseconds(1);
  DiagnosisReport report = diagnose(trace, p, config);
  CHECK(report.timed_out);
  CHECK(report.atoms.size() < 2);
}

TEST_CASE("shrinking the timeout never changes completed entries") {
  Trace trace = prepare(testutil::load_trace("rises_demo.csv"), {"beta3"});
  Property p = testutil::load_property("rises_and_assert.prop");
  DiagnosisReport full = diagnose(trace, p);
  REQUIRE_FALSE(full.timed_out);
  for (auto budget : {std::chrono::nanoseconds(1), std::chrono::nanoseconds(1000),
                      std::chrono::nanoseconds(std::chrono::seconds(30))}) {
    RunConfig config;
    config.timeout = budget;
    DiagnosisReport partial = diagnose(trace, p, config);
    REQUIRE(partial.atoms.size() <= full.atoms.size());
    for (size_t i = 0; i < partial.atoms.size(); ++i) {
      Json a = diagnose_document("t", "p", full);
      Json b = diagnose_document("t", "p", partial);
      CHECK(a["atoms"][i] == b["atoms"][i]);
    }
  }
}

TEST_CASE("run_batch") {
  std::string manifest_dir = testutil::data_path("");
  BatchItem p1{testutil::data_path("spike_demo.csv"), testutil::data_path("after_boundary_spike.prop")};
  BatchItem p2{testutil::data_path("becomes_demo.csv"), testutil::data_path("not_becomes.prop")};
  BatchItem missing{testutil::data_path("absent.csv"),
                    testutil::data_path("after_boundary_spike.prop")};

  SUBCASE("empty input") { CHECK(run_batch({}, RunConfig{}).empty()); }

  SUBCASE("results stay in input order and errors are isolated") {
    auto results = run_batch({p1, missing, p2}, RunConfig{}, 2);
    REQUIRE(results.size() == 3);
    CHECK(results[0].error.empty());
    CHECK_FALSE(results[1].error.empty());
    CHECK(results[2].error.empty());
    REQUIRE(results[0].report.has_value());
    CHECK_FALSE(results[0].report->timed_out);
  }

  SUBCASE("a timeout in one pair does not leak to the others") {
    RunConfig tight;
    tight.timeout = std::chrono::nanoseconds(1);
    auto one = run_batch({p1}, tight);
    REQUIRE(one[0].report.has_value());
    CHECK(one[0].report->timed_out);
    auto mixed = run_batch({p1, p2}, RunConfig{});
    CHECK_FALSE(mixed[0].report->timed_out);
    CHECK_FALSE(mixed[1].report->timed_out);
  }

  SUBCASE("repeated runs are byte-identical") {
    auto r1 = run_batch({p1, p2}, RunConfig{});
    auto r2 = run_batch({p1, p2}, RunConfig{});
    CHECK(render(batch_document("m", r1)) == render(batch_document("m", r2)));
  }
}

TEST_CASE("generator shapes satisfy their advertised structure") {
  GeneratorSpec spec;
  spec.shape = GeneratorSpec::Shape::constant;
  spec.n_records = 10;
  spec.seed = 1;
  Trace constant = generate_trace(spec);
  REQUIRE(constant.size() == 10);
  for (size_t i = 1; i < constant.size(); ++i)
    CHECK(constant.value(i, "s") == constant.value(0, "s"));

  Atom osc_atom = atoms_of(parse_property(
      "globally exist oscillation in s with p2pAmp < 90 period < 0.5")).front();
  auto bindings = causes_for(constant, osc_atom);
  bool found = false;
  for (const auto& b : bindings)
    if (b.id == ViolationCauseId{CauseFamily::oscillation, 5})
      found = check_cause(constant, b);
  CHECK(found);

  spec.shape = GeneratorSpec::Shape::cause_seeded;
  spec.cause = ViolationCauseId{CauseFamily::rises, 4};
  Trace seeded = generate_trace(spec);
  Property p = parse_property(cause_property_text(*spec.cause));
  Trace prepared = prepare(seeded, used_variables(p));
  bool above_then_below = true;
  bool seen_below = false;
  for (size_t i = 0; i < prepared.size(); ++i) {
    double v = prepared.value(i, "s");
    if (v < 100.0) seen_below = true;
    else if (seen_below) above_then_below = false;
  }
  CHECK(above_then_below);
  CHECK(seen_below);

  CHECK_THROWS_AS(generate_trace(GeneratorSpec{
                      GeneratorSpec::Shape::constant, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("spiky traces with tight amplitude bounds satisfy the first cause") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 10; ++round) {
    GeneratorSpec spec;
    spec.shape = GeneratorSpec::Shape::spiky;
    spec.n_spikes = 1;
    spec.n_records = 6;
    spec.seed = rng();
    spec.amp_range = {100, 200};
    spec.width_range = {1, 2};
    Trace trace = generate_trace(spec);
    Atom atom = atoms_of(parse_property(
        "globally exists spike in s with amplitude < 90")).front();
    auto bindings = causes_for(trace, atom);
    REQUIRE(bindings.front().id == ViolationCauseId{CauseFamily::spike, 1});
    CHECK(check_cause(trace, bindings.front()));
  }
}

TEST_CASE("naive oracle matches the paper-style spot checks") {
  Trace constant_signal = prepare(testutil::load_trace("spike_demo.csv"), {"beta2"});
  Atom spike = atoms_of(parse_property("globally exists spike in beta2")).front();
  CHECK_FALSE(naive_eval(constant_signal, spike));

  Trace one = parse_csv("timestamp,s\n0,1\n");
  Atom assert_atom = atoms_of(parse_property("globally assert s < 2")).front();
  CHECK(naive_eval(one, assert_atom));

  std::mt19937_64 rng(55);
  Trace trace = random_trace(rng, 12);
  Atom atom = random_atom(rng, trace);
  CHECK(naive_eval(trace, atom) == eval_atom(trace, atom).holds);
}
