#pragma once

#include "sigdiag/ast.hpp"
#include "sigdiag/shapes.hpp"
#include "sigdiag/trace.hpp"

namespace sigdiag {

struct EvalOptions {
  /// Absolute tolerance applied to '=' and '<>' only.
  double epsilon = 0;
};

struct Verdict {
  bool holds = false;
  EvaluationInterval evaluated;
};

bool compare(double lhs, CmpOp op, double rhs, double epsilon);

/// Quantifiers range over record timestamps; a record belongs to an interval
/// by plain comparison of its timestamp against the bounds.
Verdict eval_property(const Trace& trace, const Property& property,
                      const EvalOptions& opts = {});
Verdict eval_atom(const Trace& trace, const Atom& atom,
                  const EvalOptions& opts = {});
Verdict eval_scope(const Trace& trace, const Scope& scope,
                   const EvalOptions& opts = {});
bool eval_pattern(const Trace& trace, const EvaluationInterval& interval,
                  const Pattern& pattern, const EvalOptions& opts = {});
bool eval_condition(const Trace& trace, size_t record_index,
                    const Condition& condition, const EvalOptions& opts = {});

/// Interval a satisfied absolute scope hands to its pattern. Event scopes and
/// boundary-violating scopes fall back to the full trace span.
EvaluationInterval derived_interval(const Trace& trace, const Scope& scope);

}  // namespace sigdiag
