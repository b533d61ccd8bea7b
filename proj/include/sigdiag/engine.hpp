#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "sigdiag/diagnosis.hpp"

namespace sigdiag {

struct RunConfig {
  std::chrono::nanoseconds timeout = std::chrono::seconds(60);
  InterpolationPolicy interpolation = InterpolationPolicy::linear;
  double epsilon = 0;

  EvalOptions eval_options() const { return EvalOptions{epsilon}; }
};

struct AtomOutcome {
  size_t index = 0;
  std::string text;
  bool holds = false;
  /// Present iff the atom is violated and some cataloged cause applied.
  std::optional<DiagnosisInstance> diagnosis;
};

struct DiagnosisReport {
  bool property_holds = false;
  std::vector<AtomOutcome> atoms;  // entries completed before the deadline
  bool timed_out = false;
  std::chrono::milliseconds duration{0};
};

using Deadline = std::chrono::steady_clock::time_point;

struct AtomDiagnosisResult {
  std::optional<DiagnosisInstance> diagnosis;
  bool timed_out = false;
};

/// Walks the atom's ordered cause list and returns the first applicable
/// cause's diagnosis. The deadline is checked between cause evaluations.
AtomDiagnosisResult diagnose_atom(const Trace& trace, const Atom& atom,
                                  Deadline deadline,
                                  const EvalOptions& opts = {});

/// Re-checks every atom and attaches a diagnosis to each violated one.
/// Expects a prepared trace.
DiagnosisReport diagnose(const Trace& trace, const Property& property,
                         const RunConfig& config = {});

struct BatchItem {
  std::string trace_path;
  std::string property_path;
};

struct BatchResult {
  BatchItem item;
  std::string error;  // non-empty when the pair failed to load
  std::optional<DiagnosisReport> report;
  std::string property_text;
};

/// Independent runs, each with its own timeout; results in input order.
std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items,
                                   const RunConfig& config, unsigned jobs = 1);

}  // namespace sigdiag
