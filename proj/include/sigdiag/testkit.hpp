#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "sigdiag/causes.hpp"
#include "sigdiag/trace.hpp"

namespace sigdiag {

/// Brute-force evaluation by exhaustive quantifier enumeration. Shares only
/// the AST and trace types with the checker; every predicate is re-derived
/// with plain nested loops. Intended for small traces only.
bool naive_eval(const Trace& trace, const Atom& atom, double epsilon = 0,
                size_t size_bound = 30);
bool naive_eval_pattern(const Trace& trace, const EvaluationInterval& interval,
                        const Pattern& pattern, double epsilon = 0,
                        size_t size_bound = 30);

struct GeneratorSpec {
  enum class Shape {
    constant,
    increasing,
    decreasing,
    single_extremum,
    two_extrema,
    spiky,
    oscillating,
    cause_seeded,
  };

  Shape shape = Shape::constant;
  int n_records = 10;
  uint64_t seed = 0;

  int n_spikes = 1;
  std::pair<double, double> amp_range{100, 200};
  std::pair<double, double> width_range{1, 2};
  std::pair<double, double> p2p_range{100, 200};
  std::pair<double, double> period_range{1, 2};

  std::optional<ViolationCauseId> cause;  // cause_seeded only
};

std::optional<GeneratorSpec::Shape> shape_from_name(const std::string& name);

/// Deterministic for a fixed spec. Cause-seeded traces are verified against
/// check_cause before they are returned.
Trace generate_trace(const GeneratorSpec& spec);

/// Property each cause-seeded trace is meant to violate; parses with
/// parse_property.
std::string cause_property_text(const ViolationCauseId& id);

// Randomized corpus pieces for the checker/oracle equivalence suite.
Trace random_trace(std::mt19937_64& rng, int max_records = 15);
Atom random_atom(std::mt19937_64& rng, const Trace& trace);

}  // namespace sigdiag
