#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "sigdiag/report.hpp"

using namespace sigdiag;

namespace {

void report_line(int criterion, const char* what, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

struct GoldenCheck {
  std::string name;
  bool ok = true;

  void expect(bool condition, const std::string& detail) {
    if (!condition) {
      ok = false;
      std::printf("  golden '%s' mismatch: %s\n", name.c_str(), detail.c_str());
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool pair_eq(const RecordPairPayload& p, double t1, double v1, double t2,
             double v2) {
  return p.first.t == t1 && p.first.value == v1 && p.second.t == t2 &&
         p.second.value == v2;
}

}  // namespace

TEST_CASE("criterion 1: worked-example goldens") {
  bool all_ok = true;
  bool all_fast = true;

  auto golden = [&](const std::string& name, const std::string& trace,
                    const std::string& prop,
                    auto&& verify) {
    GoldenCheck check{name};
    auto start = Clock::now();
    DiagnosisReport report = testutil::run_pair(trace, prop);
    double elapsed = seconds_since(start);
    if (elapsed >= 1.0) {
      all_fast = false;
      std::printf("  golden '%s' took %.3fs (budget 1s)\n", name.c_str(), elapsed);
    }
    verify(report, check);
    if (!check.ok) all_ok = false;
  };

  golden("after-scope boundary", "spike_demo.csv", "after_boundary_spike.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           g.expect(r.atoms.size() == 1 && r.atoms[0].diagnosis.has_value(),
                    "expected one diagnosed atom");
           if (!g.ok) return;
           const auto& d = *r.atoms[0].diagnosis;
           g.expect(to_string(d.cause) == "c_a_aft_1", "cause " + to_string(d.cause));
           const auto* p = std::get_if<IntervalAndBoundary>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 6 &&
                        p->boundary == 7,
                    "payload is not <[0,6], 7>");
         });

  // Pinned to the trace data: the first record satisfying the state change
  // is (4, 0.8); quoted variants of this example round the value to 0.9.
  golden("negated becomes", "becomes_demo.csv", "not_becomes.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(to_string(d.cause) == "c_not_1", "cause " + to_string(d.cause));
           g.expect(d.id == "d_not_becomes", "id " + d.id);
           const auto* p = std::get_if<RecordWithValues>(&d.payload);
           g.expect(p && p->t == 4.0 && p->values.at("beta3") == 0.8,
                    "payload is not (4, 0.8)");
         });

  // Pinned to the trace data (4.8 at t=5); rounded retellings say 4.9.
  golden("rises and assert conjunction", "rises_demo.csv", "rises_and_assert.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           g.expect(r.atoms.size() == 2, "expected two atom entries");
           if (!g.ok) return;
           g.expect(r.atoms[0].diagnosis && r.atoms[0].diagnosis->id == "d_rises_3",
                    "first diagnosis is not d_rises_3");
           g.expect(r.atoms[1].diagnosis && r.atoms[1].diagnosis->id == "d_assert_1",
                    "second diagnosis is not d_assert_1");
           if (!g.ok) return;
           const auto* rp =
               std::get_if<RecordPairPayload>(&r.atoms[0].diagnosis->payload);
           g.expect(rp && pair_eq(*rp, 2, 2, 3, 0.5), "d_rises_3 payload");
           const auto* ap =
               std::get_if<RecordWithValues>(&r.atoms[1].diagnosis->payload);
           g.expect(ap && ap->t == 5.0 && ap->values.at("beta3") == 4.8,
                    "d_assert_1 payload");
         });

  golden("assert figure", "assert_demo.csv", "assert_lt4.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_assert_1", "id " + d.id);
           const auto* p = std::get_if<RecordWithValues>(&d.payload);
           g.expect(p && p->t == 4.0 && p->values.at("beta1") == 5.0,
                    "payload is not <4, beta1=5>");
         });

  // The amplitude formula over these samples gives exactly 153 (the larger
  // of |153.5-2| and |153.5-0.5|); rounded retellings of this example quote
  // 150 or 153.5. The formula value is pinned.
  golden("spike closest amplitude", "spike_demo.csv", "spike_demo_b1.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_spike_1", "id " + d.id);
           const auto* p = std::get_if<IntervalWithValue>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 1.8 &&
                        p->value == 153.0,
                    "payload is not <[0,1.8], 153>");
         });

  golden("spike constant", "spike_demo.csv", "spike_demo_b2.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_spike_3", "id " + d.id);
           const auto* p = std::get_if<IntervalWithValue>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 6 &&
                        p->value == 100.0,
                    "payload is not <[0,6], 100>");
         });

  golden("spike decreasing", "spike_demo.csv", "spike_demo_b3.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_spike_4", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 0, 200, 6, 55), "payload");
         });

  golden("spike increasing", "spike_demo.csv", "spike_demo_b4.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_spike_5", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 0, 30, 6, 190), "payload");
         });

  golden("oscillation closest amplitude", "oscillation_demo.csv", "oscillation_demo_b1.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_oscillation_1", "id " + d.id);
           const auto* p = std::get_if<IntervalWithValue>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 1.9 &&
                        p->value == 125.0,
                    "payload is not <[0,1.9], 125>");
         });

  golden("oscillation closest period", "oscillation_demo.csv", "oscillation_demo_b1_period.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_oscillation_2", "id " + d.id);
           const auto* p = std::get_if<IntervalWithValue>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 1.9 &&
                        p->value == 0.8,
                    "payload is not <[0,1.9], 0.8>");
         });

  golden("oscillation single extremum", "oscillation_demo.csv", "oscillation_demo_b2.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_oscillation_3", "id " + d.id);
           const auto* p = std::get_if<RecordWithValues>(&d.payload);
           g.expect(p && p->t == 1.5 && p->values.at("beta2") == 150.0,
                    "payload is not <1.5, 150>");
         });

  golden("oscillation two extrema", "oscillation_demo.csv", "oscillation_demo_b3.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_oscillation_4", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 1.5, 80, 2, 150), "payload");
         });

  golden("oscillation constant", "oscillation_demo.csv", "oscillation_demo_b4.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_oscillation_5", "id " + d.id);
           const auto* p = std::get_if<IntervalWithValue>(&d.payload);
           g.expect(p && p->interval.lower == 0 && p->interval.upper == 6 &&
                        p->value == 180.0,
                    "payload is not <[0,6], 180>");
         });

  golden("rises range", "rises_demo.csv", "rises_demo_b1.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_rises_1", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 6.7, 2.5, 5, 0.8), "payload");
         });

  golden("rises drop", "rises_demo.csv", "rises_demo_b4.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_rises_4", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 3, 3.1, 4, 0.5), "payload");
         });

  golden("overshoot monotonicity", "overshoot_demo.csv", "overshoot_demo_b3.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_overshoots_3", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 2, 2, 3, 0.5), "payload");
         });

  golden("overshoot dual drop", "overshoot_demo.csv", "overshoot_demo_b4.prop",
         [](const DiagnosisReport& r, GoldenCheck& g) {
           const auto& d = testutil::first_diagnosis(r);
           g.expect(d.id == "d_overshoots_4", "id " + d.id);
           const auto* p = std::get_if<RecordPairPayload>(&d.payload);
           g.expect(p && pair_eq(*p, 2, 3.8, 3, 2.1), "payload");
         });

  report_line(1, "worked-example goldens (exact payload match)", all_ok);
  report_line(1, "each golden completed within 1 s", all_fast);
}

TEST_CASE("criterion 2: cause soundness, 100 seeded traces per cause") {
  int failures = 0;
  auto start = Clock::now();
  for (const auto& id : cause_catalog()) {
    Property property = parse_property(cause_property_text(id));
    Atom atom = atoms_of(property).front();
    for (uint64_t seed = 1; seed <= 100; ++seed) {
      GeneratorSpec spec;
      spec.shape = GeneratorSpec::Shape::cause_seeded;
      spec.cause = id;
      spec.seed = seed;
      spec.n_records = 8 + static_cast<int>(seed % 9);
      Trace trace = generate_trace(spec);
      Trace prepared = prepare(trace, used_variables(property));

      bool cause_holds = false;
      for (const auto& binding : causes_for(prepared, atom))
        if (binding.id == id) cause_holds = check_cause(prepared, binding);
      bool atom_holds = eval_atom(prepared, atom).holds;
      if (!cause_holds || atom_holds) {
        ++failures;
        std::printf("  soundness breach: %s seed %llu (cause=%d atom=%d)\n",
                    to_string(id).c_str(),
                    static_cast<unsigned long long>(seed), cause_holds,
                    atom_holds);
      }
    }
  }
  double elapsed = seconds_since(start);
  std::printf("  soundness sweep: 3400 runs in %.1fs\n", elapsed);
  report_line(2, "cause => construct violated, 3400/3400", failures == 0);
  report_line(2, "soundness sweep under 5 minutes", elapsed < 300.0);
}

TEST_CASE("criterion 3: checker equals the exhaustive oracle") {
  std::mt19937_64 rng(424242);
  int mismatches = 0;
  const int total = 1200;
  auto start = Clock::now();
  for (int round = 0; round < total; ++round) {
    Trace trace = random_trace(rng, 15);
    Atom atom = random_atom(rng, trace);
    bool fast = eval_atom(trace, atom).holds;
    bool slow = naive_eval(trace, atom);
    if (fast != slow) {
      ++mismatches;
      std::printf("  divergence on: %s\n", to_string(atom).c_str());
    }
  }
  // Same sweep with a nonzero tolerance on = and <>.
  EvalOptions loose{0.5};
  for (int round = 0; round < 300; ++round) {
    Trace trace = random_trace(rng, 15);
    Atom atom = random_atom(rng, trace);
    if (eval_atom(trace, atom, loose).holds != naive_eval(trace, atom, 0.5))
      ++mismatches;
  }
  double elapsed = seconds_since(start);
  std::printf("  equivalence sweep: %d pairs in %.1fs\n", total + 300, elapsed);
  report_line(3, "oracle equivalence on 1500 randomized pairs", mismatches == 0);
  report_line(3, "equivalence sweep under 10 minutes", elapsed < 600.0);
}

TEST_CASE("criterion 4: every cause is engine-selected on a seeded trace") {
  int covered = 0;
  for (const auto& id : cause_catalog()) {
    Property property = parse_property(cause_property_text(id));
    bool hit = false;
    for (uint64_t seed = 1; seed <= 10 && !hit; ++seed) {
      GeneratorSpec spec;
      spec.shape = GeneratorSpec::Shape::cause_seeded;
      spec.cause = id;
      spec.seed = seed;
      spec.n_records = 10;
      Trace prepared =
          prepare(generate_trace(spec), used_variables(property));
      DiagnosisReport report = diagnose(prepared, property);
      if (!report.atoms.empty() && report.atoms[0].diagnosis &&
          report.atoms[0].diagnosis->cause == id)
        hit = true;
    }
    if (hit) {
      ++covered;
    } else {
      std::printf("  cause %s never engine-selected\n", to_string(id).c_str());
    }
  }
  report_line(4, "catalog coverage 34/34", covered == 34);
}

TEST_CASE("criterion 5: large-trace assert diagnosis under the time budget") {
  Property property = testutil::load_property("mu_bound.prop");
  bool all_ok = true;
  double worst = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec;
    spec.shape = GeneratorSpec::Shape::cause_seeded;
    spec.cause = ViolationCauseId{CauseFamily::assertion, 1};
    spec.seed = seed;
    spec.n_records = 24000;
    Trace trace = generate_trace(spec);
    if (trace.size() < 23000 || trace.size() > 25000) all_ok = false;
    Trace prepared = prepare(trace, used_variables(property));
    auto start = Clock::now();
    DiagnosisReport report = diagnose(prepared, property);
    double elapsed = seconds_since(start);
    worst = std::max(worst, elapsed);
    if (report.timed_out || elapsed >= 60.0) all_ok = false;
    if (report.atoms.size() != 1 || !report.atoms[0].diagnosis) {
      all_ok = false;
      continue;
    }
    const auto& d = *report.atoms[0].diagnosis;
    if (to_string(d.cause) != "c_assert_1") all_ok = false;
    const auto* p = std::get_if<RecordWithValues>(&d.payload);
    if (!p || p->t < 11.0 || p->t > 50.0) all_ok = false;
    if (!p || p->t != 45.85 || p->values.at("mu") != 0.0070278) all_ok = false;
  }
  std::printf("  slowest of 10 large runs: %.3fs (budget 60s, target 2s)\n",
              worst);
  report_line(5, "10 large seeded runs diagnosed in [11,50] within 60 s",
              all_ok);
  report_line(5, "large runs hit the 2 s target", worst < 2.0);
}

TEST_CASE("criterion 6: repeated diagnose runs are byte-identical") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "sigdiag_acceptance";
  fs::create_directories(dir);
  auto run = [&](const std::string& out) {
    std::string cmd = std::string(SIGDIAG_CLI_PATH) + " diagnose '" +
                      testutil::data_path("rises_demo.csv") + "' '" +
                      testutil::data_path("rises_and_assert.prop") + "' --output '" + out +
                      "' >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  std::string a = (dir / "first.json").string();
  std::string b = (dir / "second.json").string();
  bool ok = run(a) == 0 && run(b) == 0;
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::string da = slurp(a);
  ok = ok && !da.empty() && da == slurp(b);
  report_line(6, "cmd diagnose twice -> byte-identical documents", ok);
}

TEST_CASE("criterion 7: proprietary percentages substituted by criteria 2-5") {
  // The original applicability percentages come from a dataset that cannot be
  // redistributed; criteria 2-5 stand in for them here.
  report_line(7, "substituted by criteria 2-5 (informational)", true);
}
