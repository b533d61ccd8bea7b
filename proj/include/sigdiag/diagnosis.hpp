#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sigdiag/causes.hpp"

namespace sigdiag {

struct RecordRef {
  double t = 0;
  double value = 0;
  friend bool operator==(const RecordRef&, const RecordRef&) = default;
};

struct RecordPairPayload {
  RecordRef first, second;
};
struct RecordWithValues {
  double t = 0;
  std::map<std::string, double> values;
};
struct IntervalWithValue {
  EvaluationInterval interval;
  double value = 0;
};
struct IntervalOnly {
  EvaluationInterval interval;
};
struct IntervalAndBoundary {
  EvaluationInterval interval;
  double boundary = 0;
};
struct IntervalAndBoundaries {
  EvaluationInterval interval;
  double first = 0, second = 0;
};
struct IntervalWithDistance {
  EvaluationInterval interval;
  double distance = 0;
};

using DiagnosisPayload =
    std::variant<RecordPairPayload, RecordWithValues, IntervalWithValue,
                 IntervalOnly, IntervalAndBoundary, IntervalAndBoundaries,
                 IntervalWithDistance>;

struct DiagnosisInstance {
  std::string id;  // d_spike_1, d_a_bet_1, d_not_becomes, d_if_then_2, ...
  ViolationCauseId cause;
  bool dual = false;
  ShapePolarity polarity = ShapePolarity::as_written;
  DiagnosisPayload payload;
};

/// Witness payload for a satisfied cause. Returns nothing only in the
/// degenerate corners where the cause holds vacuously and no witness record
/// exists (e.g. a satisfied scope whose interval contains no samples).
std::optional<DiagnosisInstance> build_diagnosis(const Trace& trace,
                                                 const CauseBinding& binding,
                                                 const EvalOptions& opts = {});

/// Closest-witness selection: smallest |measure - target| wins; ties fall to
/// the earliest interval start, then the shortest interval.
struct WitnessCandidate {
  double measure = 0;
  double start = 0;
  double length = 0;
};
std::optional<size_t> tie_break(const std::vector<WitnessCandidate>& candidates,
                                double target);

}  // namespace sigdiag
